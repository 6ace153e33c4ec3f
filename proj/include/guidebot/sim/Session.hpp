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

#ifndef GUIDEBOT__SIM__SESSION_HPP
#define GUIDEBOT__SIM__SESSION_HPP

#include <guidebot/msgbus/Bus.hpp>
#include <guidebot/sim/Robot.hpp>
#include <guidebot/speech/SpeechFlow.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <stop_token>

namespace guidebot {
namespace sim {

/// Result of one transcript taken off speech.transcript.
struct OutcomeRecord
{
  /// Sequence number of the TranscriptMsg on speech.transcript.
  std::uint64_t transcript_seq = 0;
  std::uint64_t tick = 0;
  std::string text;
  /// Empty when the transcript could not be handled; see error.
  std::optional<speech::HandleOutcome> outcome;
  std::string error;
};

//==============================================================================
/// One guided-walk session: the speech pipeline wired to a simulated robot
/// through the bus.
///
/// All pending bus traffic is processed before each tick, in publish order,
/// so a session driven by the same inputs always evolves the same way. The
/// session object itself is not thread-safe; drive it from one thread and use
/// the bus to feed it from others.
class Session
{
public:

  using OutcomeListener = std::function<void(const OutcomeRecord&)>;

  /// Registers the standard topics on the bus and subscribes to
  /// speech.transcript, nav.goal and nav.stop. Throws ValidationError for a
  /// bad sim config or a lexicon that names unknown locations.
  Session(
    std::shared_ptr<const nav::SiteMap> site,
    speech::WakeConfig wake,
    speech::Lexicon lexicon,
    SimConfig config,
    msgbus::Bus& bus);

  /// Handles every queued transcript and navigation command.
  void process_pending();

  /// process_pending() followed by one robot tick.
  void tick();

  /// Runs tick() every config().tick until stop is requested.
  void run(std::stop_token stop);

  void set_outcome_listener(OutcomeListener listener);

  const RobotState& state() const { return _state; }
  std::uint64_t tick_count() const { return _ticks; }
  const SimConfig& config() const { return _config; }
  const nav::SiteMap& site() const { return *_site; }
  const speech::WakeConfig& wake() const { return _wake; }
  const speech::Lexicon& lexicon() const { return _lexicon; }

private:
  void apply_nav_commands();

  std::shared_ptr<const nav::SiteMap> _site;
  speech::WakeConfig _wake;
  speech::Lexicon _lexicon;
  SimConfig _config;
  msgbus::Bus& _bus;

  msgbus::Subscription _transcripts;
  msgbus::Subscription _goals;
  msgbus::Subscription _stops;

  RobotState _state;
  std::uint64_t _ticks = 0;
  OutcomeListener _listener;
};

} // namespace sim
} // namespace guidebot

#endif // GUIDEBOT__SIM__SESSION_HPP
