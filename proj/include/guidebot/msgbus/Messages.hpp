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

#ifndef GUIDEBOT__MSGBUS__MESSAGES_HPP
#define GUIDEBOT__MSGBUS__MESSAGES_HPP

#include <guidebot/nav/Planner.hpp>
#include <guidebot/nav/SiteMap.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

namespace guidebot {

//==============================================================================
/// An utterance that entered the pipeline as text.
struct TranscriptMsg
{
  std::string text;
  std::int64_t timestamp_ms = 0;
  std::optional<double> confidence;

  friend bool operator==(const TranscriptMsg&, const TranscriptMsg&) = default;
};

/// Floor-qualified navigation goal taken from a named location.
struct GoalMsg
{
  std::string location_id;
  nav::GoalPose pose;

  friend bool operator==(const GoalMsg&, const GoalMsg&) = default;
};

/// Text the robot should say.
struct SpeechOutMsg
{
  std::string text;

  friend bool operator==(const SpeechOutMsg&, const SpeechOutMsg&) = default;
};

/// Hold at the current position.
struct StopMsg
{
  friend bool operator==(const StopMsg&, const StopMsg&) = default;
};

enum class MotionStatus
{
  Idle,
  Navigating,
  Stopped
};

std::string_view to_string(MotionStatus status);

/// Snapshot of the simulated robot, published every tick.
struct StateMsg
{
  std::string floor_id;
  nav::Cell cell;
  double heading_rad = 0.0;
  MotionStatus status = MotionStatus::Idle;
  std::optional<std::string> goal_location_id;
  std::optional<nav::Path> path;

  friend bool operator==(const StateMsg&, const StateMsg&) = default;
};

using Payload =
  std::variant<TranscriptMsg, GoalMsg, SpeechOutMsg, StateMsg, StopMsg>;

enum class PayloadKind
{
  Transcript,
  Goal,
  SpeechOut,
  State,
  Stop
};

PayloadKind kind_of(const Payload& payload);

/// Wire names: "TranscriptMsg", "GoalMsg", "SpeechOutMsg", "StateMsg",
/// "StopMsg".
std::string_view to_string(PayloadKind kind);

//==============================================================================
// JSON encodings shared by the event log and the gateway wire protocol.

nlohmann::json to_json(const nav::Path& path);
nlohmann::json to_json(const TranscriptMsg& msg);
nlohmann::json to_json(const GoalMsg& msg);
nlohmann::json to_json(const SpeechOutMsg& msg);
nlohmann::json to_json(const StateMsg& msg);
nlohmann::json to_json(const StopMsg& msg);
nlohmann::json to_json(const Payload& payload);

} // namespace guidebot

#endif // GUIDEBOT__MSGBUS__MESSAGES_HPP
