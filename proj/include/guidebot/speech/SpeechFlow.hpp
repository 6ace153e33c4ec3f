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

#ifndef GUIDEBOT__SPEECH__SPEECHFLOW_HPP
#define GUIDEBOT__SPEECH__SPEECHFLOW_HPP

#include <guidebot/msgbus/Bus.hpp>
#include <guidebot/nav/SiteMap.hpp>
#include <guidebot/speech/Lexicon.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace guidebot {
namespace speech {

struct Transcript
{
  std::string text;
  std::int64_t timestamp_ms = 0;
  /// Carried through but not used for gating.
  std::optional<double> confidence;
};

//==============================================================================
struct GatePass
{
  /// Tokens strictly after the first occurrence of the wake phrase.
  TokenSeq remainder;

  friend bool operator==(const GatePass&, const GatePass&) = default;
};

struct GateIgnore
{
  friend bool operator==(const GateIgnore&, const GateIgnore&) = default;
};

using GateResult = std::variant<GatePass, GateIgnore>;

/// Passes when the wake phrase occurs anywhere in the tokens as a contiguous
/// run.
GateResult gate_wake_word(const TokenSeq& tokens, const WakeConfig& cfg);

//==============================================================================
struct GoTo
{
  std::string location_id;

  friend bool operator==(const GoTo&, const GoTo&) = default;
};

struct Stop
{
  friend bool operator==(const Stop&, const Stop&) = default;
};

struct Unknown
{
  TokenSeq remainder;

  friend bool operator==(const Unknown&, const Unknown&) = default;
};

using Intent = std::variant<GoTo, Stop, Unknown>;

/// Any stop keyword wins. Otherwise the location keyword whose occurrence
/// starts earliest wins, ties going to the longer keyword and then to the
/// earlier lexicon entry.
Intent parse_intent(const TokenSeq& remainder, const Lexicon& lexicon);

/// Spoken reply for an intent. Throws UnknownLocation when a GoTo target has
/// no display name in the site.
std::string compose_response(const Intent& intent, const nav::SiteMap& site);

//==============================================================================
struct Ignored
{
  friend bool operator==(const Ignored&, const Ignored&) = default;
};

struct Commanded
{
  Intent intent;

  friend bool operator==(const Commanded&, const Commanded&) = default;
};

using HandleOutcome = std::variant<Ignored, Commanded>;

/// Runs one transcript through the wake gate and the word dictionary and
/// publishes the result: a GoalMsg on nav.goal or a StopMsg on nav.stop, plus
/// the spoken reply on speech.say. Ignored transcripts publish nothing.
///
/// Calls for one session must not overlap.
HandleOutcome handle_transcript(
  const Transcript& transcript,
  const WakeConfig& cfg,
  const Lexicon& lexicon,
  const nav::SiteMap& site,
  msgbus::Bus& bus);

} // namespace speech
} // namespace guidebot

#endif // GUIDEBOT__SPEECH__SPEECHFLOW_HPP
