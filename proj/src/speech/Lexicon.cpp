/*
 * Copyright (C) 2026 The guidebot authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include <guidebot/speech/Lexicon.hpp>

#include <guidebot/Error.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace guidebot {
namespace speech {

namespace {

bool is_alnum(char c)
{
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')
    || (c >= '0' && c <= '9');
}

char lower(char c)
{
  if (c >= 'A' && c <= 'Z')
    return static_cast<char>(c - 'A' + 'a');
  return c;
}

} // anonymous namespace

//==============================================================================
TokenSeq normalize(std::string_view text)
{
  TokenSeq tokens;
  std::string current;
  for (const char c : text)
  {
    if (is_alnum(c))
    {
      current.push_back(lower(c));
    }
    else if (!current.empty())
    {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }

  if (!current.empty())
    tokens.push_back(std::move(current));

  return tokens;
}

//==============================================================================
std::string join(const TokenSeq& tokens)
{
  std::string out;
  for (const auto& t : tokens)
  {
    if (!out.empty())
      out.push_back(' ');
    out += t;
  }
  return out;
}

//==============================================================================
std::size_t find_subsequence(
  const TokenSeq& haystack, const TokenSeq& needle, std::size_t from)
{
  if (needle.empty() || needle.size() > haystack.size())
    return std::string::npos;

  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i)
  {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + i))
      return i;
  }
  return std::string::npos;
}

//==============================================================================
WakeConfig::WakeConfig()
: _phrase{"hey", "a1"}
{
  // Do nothing
}

//==============================================================================
WakeConfig::WakeConfig(std::string_view phrase)
: _phrase(normalize(phrase))
{
  if (_phrase.empty())
  {
    throw ValidationError(
      "wake phrase [" + std::string(phrase) + "] has no words");
  }
}

//==============================================================================
Lexicon::Lexicon(
  std::vector<LexEntry> entries,
  std::vector<TokenSeq> stop_keywords)
: _entries(std::move(entries)),
  _stop_keywords(std::move(stop_keywords))
{
  std::set<TokenSeq> seen;
  for (const auto& entry : _entries)
  {
    if (entry.keywords.empty())
    {
      throw ValidationError(
        "lexicon entry [" + entry.location_id + "] has no keywords");
    }

    for (const auto& kw : entry.keywords)
    {
      if (kw.empty())
      {
        throw ValidationError(
          "lexicon entry [" + entry.location_id + "] has an empty keyword");
      }

      if (!seen.insert(kw).second)
      {
        throw ValidationError(
          "keyword [" + join(kw) + "] is used by more than one entry");
      }
    }
  }

  for (const auto& kw : _stop_keywords)
  {
    if (kw.empty())
      throw ValidationError("stop keyword must not be empty");
  }
}

//==============================================================================
void Lexicon::validate_against(const nav::SiteMap& site) const
{
  for (const auto& entry : _entries)
  {
    if (site.locations().count(entry.location_id) == 0)
    {
      throw ValidationError(
        "lexicon entry references location [" + entry.location_id
        + "] which the map does not define");
    }
  }
}

//==============================================================================
namespace {

using nlohmann::json;

std::vector<TokenSeq> keyword_list(const json& value, const std::string& where)
{
  if (!value.is_array())
    throw SchemaError(where + ": expected an array of strings");

  std::vector<TokenSeq> out;
  for (std::size_t i = 0; i < value.size(); ++i)
  {
    if (!value[i].is_string())
    {
      throw SchemaError(
        where + "[" + std::to_string(i) + "]: expected a string");
    }
    out.push_back(normalize(value[i].get<std::string>()));
  }
  return out;
}

} // anonymous namespace

//==============================================================================
LexiconFile load_lexicon(const nlohmann::json& doc)
{
  if (!doc.is_object())
    throw SchemaError("lexicon: expected a JSON object");

  WakeConfig wake;
  if (const auto it = doc.find("wake_phrase"); it != doc.end())
  {
    if (!it->is_string())
      throw SchemaError("wake_phrase: expected a string");
    wake = WakeConfig(it->get<std::string>());
  }

  std::vector<TokenSeq> stops = {{"stop"}};
  if (const auto it = doc.find("stop_keywords"); it != doc.end())
    stops = keyword_list(*it, "stop_keywords");

  const auto entries_it = doc.find("entries");
  if (entries_it == doc.end())
    throw SchemaError("lexicon: missing field 'entries'");
  if (!entries_it->is_array())
    throw SchemaError("entries: expected an array");

  std::vector<LexEntry> entries;
  for (std::size_t i = 0; i < entries_it->size(); ++i)
  {
    const std::string where = "entries[" + std::to_string(i) + "]";
    const auto& e = (*entries_it)[i];
    if (!e.is_object())
      throw SchemaError(where + ": expected an object");

    const auto id = e.find("location_id");
    if (id == e.end() || !id->is_string())
      throw SchemaError(where + ".location_id: expected a string");

    const auto kws = e.find("keywords");
    if (kws == e.end())
      throw SchemaError(where + ": missing field 'keywords'");

    entries.push_back(
      {id->get<std::string>(), keyword_list(*kws, where + ".keywords")});
  }

  return {std::move(wake), Lexicon(std::move(entries), std::move(stops))};
}

//==============================================================================
LexiconFile load_lexicon(std::string_view text)
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw SchemaError(std::string("lexicon: malformed JSON: ") + e.what());
  }
  return load_lexicon(doc);
}

//==============================================================================
LexiconFile load_lexicon_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw SchemaError("cannot open lexicon file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_lexicon(std::string_view(ss.str()));
}

} // namespace speech
} // namespace guidebot
