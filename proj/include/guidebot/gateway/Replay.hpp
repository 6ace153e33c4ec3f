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

#ifndef GUIDEBOT__GATEWAY__REPLAY_HPP
#define GUIDEBOT__GATEWAY__REPLAY_HPP

#include <guidebot/cloud/Speaker.hpp>
#include <guidebot/gateway/EventLog.hpp>
#include <guidebot/sim/Session.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace guidebot {
namespace gateway {

//==============================================================================
struct Utterance
{
  std::string text;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct AdvanceTicks
{
  std::uint64_t ticks = 0;

  friend bool operator==(const AdvanceTicks&, const AdvanceTicks&) = default;
};

using ScriptStep = std::variant<Utterance, AdvanceTicks>;

/// One utterance per line. "#tick N" advances logical time by N ticks. Other
/// lines starting with '#' are comments and blank lines are skipped. Throws
/// SchemaError for a malformed "#tick" line.
std::vector<ScriptStep> parse_script(std::string_view text);

std::vector<ScriptStep> load_script_file(const std::string& path);

//==============================================================================
struct ReplayOptions
{
  sim::SimConfig sim;
  /// Upper bound on the ticks run after the script to let the robot arrive.
  std::uint64_t settle_limit = 100000;
  /// Defaults to a MockTtsClient.
  cloud::TtsClient* tts = nullptr;
  /// Defaults to discarding clips.
  cloud::AudioSink* sink = nullptr;
};

struct ReplayResult
{
  sim::RobotState final_state;
  std::uint64_t ticks = 0;
  std::vector<sim::OutcomeRecord> outcomes;
  std::vector<nlohmann::json> events;
  std::string event_log;
  std::size_t clips_spoken = 0;
  std::size_t clips_failed = 0;
};

/// Runs a scripted session to completion on a private bus.
///
/// Utterances are published on speech.transcript and handled immediately at
/// the current logical time. After the script, the session ticks until the
/// robot is no longer navigating (at least once, at most settle_limit times).
ReplayResult run_replay(
  std::shared_ptr<const nav::SiteMap> site,
  const speech::WakeConfig& wake,
  const speech::Lexicon& lexicon,
  const std::vector<ScriptStep>& script,
  const ReplayOptions& options);

} // namespace gateway
} // namespace guidebot

#endif // GUIDEBOT__GATEWAY__REPLAY_HPP
