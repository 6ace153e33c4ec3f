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

#ifndef GUIDEBOT__SPEECH__LEXICON_HPP
#define GUIDEBOT__SPEECH__LEXICON_HPP

#include <guidebot/nav/SiteMap.hpp>

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace guidebot {
namespace speech {

/// Canonical form of an utterance: lowercase ASCII alphanumeric tokens.
using TokenSeq = std::vector<std::string>;

/// Lowercases the text and splits it on every maximal run of characters that
/// are not ASCII letters or digits. Never produces empty tokens.
TokenSeq normalize(std::string_view text);

/// Tokens joined by single spaces.
std::string join(const TokenSeq& tokens);

/// Index of the first occurrence of needle as a contiguous run inside
/// haystack, or npos. An empty needle never matches.
std::size_t find_subsequence(const TokenSeq& haystack, const TokenSeq& needle,
  std::size_t from = 0);

//==============================================================================
class WakeConfig
{
public:

  /// "hey a1"
  WakeConfig();

  /// The phrase is normalized. Throws ValidationError if nothing remains.
  explicit WakeConfig(std::string_view phrase);

  const TokenSeq& phrase() const { return _phrase; }

private:
  TokenSeq _phrase;
};

//==============================================================================
struct LexEntry
{
  std::string location_id;
  /// Aliases, each already normalized.
  std::vector<TokenSeq> keywords;
};

/// Word dictionary mapping keyword phrases to location ids.
class Lexicon
{
public:

  /// Stop keywords default to {"stop"}. Throws ValidationError for an entry
  /// without keywords, an empty keyword, or a keyword used twice.
  explicit Lexicon(
    std::vector<LexEntry> entries,
    std::vector<TokenSeq> stop_keywords = {{"stop"}});

  const std::vector<LexEntry>& entries() const { return _entries; }
  const std::vector<TokenSeq>& stop_keywords() const { return _stop_keywords; }

  /// Throws ValidationError naming the first location id that the site does
  /// not define.
  void validate_against(const nav::SiteMap& site) const;

private:
  std::vector<LexEntry> _entries;
  std::vector<TokenSeq> _stop_keywords;
};

/// Contents of a lexicon file.
struct LexiconFile
{
  WakeConfig wake;
  Lexicon lexicon;
};

/// Parses a lexicon document. Keywords and the wake phrase are normalized.
/// Throws SchemaError or ValidationError.
LexiconFile load_lexicon(const nlohmann::json& document);
LexiconFile load_lexicon(std::string_view text);
LexiconFile load_lexicon_file(const std::string& path);

} // namespace speech
} // namespace guidebot

#endif // GUIDEBOT__SPEECH__LEXICON_HPP
