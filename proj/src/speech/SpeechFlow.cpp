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

#include <guidebot/speech/SpeechFlow.hpp>

#include <guidebot/Error.hpp>

namespace guidebot {
namespace speech {

//==============================================================================
GateResult gate_wake_word(const TokenSeq& tokens, const WakeConfig& cfg)
{
  const auto& phrase = cfg.phrase();
  const std::size_t at = find_subsequence(tokens, phrase);
  if (at == std::string::npos)
    return GateIgnore{};

  return GatePass{TokenSeq(tokens.begin() + at + phrase.size(), tokens.end())};
}

//==============================================================================
Intent parse_intent(const TokenSeq& remainder, const Lexicon& lexicon)
{
  for (const auto& kw : lexicon.stop_keywords())
  {
    if (find_subsequence(remainder, kw) != std::string::npos)
      return Stop{};
  }

  const LexEntry* best = nullptr;
  std::size_t best_start = std::string::npos;
  std::size_t best_length = 0;
  for (const auto& entry : lexicon.entries())
  {
    for (const auto& kw : entry.keywords)
    {
      const std::size_t start = find_subsequence(remainder, kw);
      if (start == std::string::npos)
        continue;

      // Strict comparisons keep the earlier entry on a full tie.
      if (!best || start < best_start
        || (start == best_start && kw.size() > best_length))
      {
        best = &entry;
        best_start = start;
        best_length = kw.size();
      }
    }
  }

  if (best)
    return GoTo{best->location_id};

  return Unknown{remainder};
}

//==============================================================================
std::string compose_response(const Intent& intent, const nav::SiteMap& site)
{
  if (const auto* go = std::get_if<GoTo>(&intent))
    return "Okay, navigating to the " + nav::display_name(site, go->location_id)
      + ".";

  if (std::holds_alternative<Stop>(intent))
    return "Okay, stopping.";

  return "Sorry, I did not understand.";
}

//==============================================================================
HandleOutcome handle_transcript(
  const Transcript& transcript,
  const WakeConfig& cfg,
  const Lexicon& lexicon,
  const nav::SiteMap& site,
  msgbus::Bus& bus)
{
  const auto gate = gate_wake_word(normalize(transcript.text), cfg);
  const auto* pass = std::get_if<GatePass>(&gate);
  if (!pass)
    return Ignored{};

  Intent intent = parse_intent(pass->remainder, lexicon);

  // Resolve everything before publishing so a lexicon/map mismatch publishes
  // nothing.
  std::string reply = compose_response(intent, site);

  if (const auto* go = std::get_if<GoTo>(&intent))
  {
    const auto& pose = nav::resolve_location(site, go->location_id);
    bus.publish(msgbus::topics::Goal, GoalMsg{go->location_id, pose});
  }
  else if (std::holds_alternative<Stop>(intent))
  {
    bus.publish(msgbus::topics::Stop, StopMsg{});
  }

  bus.publish(msgbus::topics::Say, SpeechOutMsg{std::move(reply)});
  return Commanded{std::move(intent)};
}

} // namespace speech
} // namespace guidebot
