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

#include <guidebot/msgbus/Messages.hpp>

namespace guidebot {

using nlohmann::json;

//==============================================================================
std::string_view to_string(MotionStatus status)
{
  switch (status)
  {
    case MotionStatus::Idle: return "idle";
    case MotionStatus::Navigating: return "navigating";
    case MotionStatus::Stopped: return "stopped";
  }
  return "unknown";
}

//==============================================================================
PayloadKind kind_of(const Payload& payload)
{
  return static_cast<PayloadKind>(payload.index());
}

//==============================================================================
std::string_view to_string(PayloadKind kind)
{
  switch (kind)
  {
    case PayloadKind::Transcript: return "TranscriptMsg";
    case PayloadKind::Goal: return "GoalMsg";
    case PayloadKind::SpeechOut: return "SpeechOutMsg";
    case PayloadKind::State: return "StateMsg";
    case PayloadKind::Stop: return "StopMsg";
  }
  return "unknown";
}

namespace {

json cell_json(nav::Cell c)
{
  return json::array({c.col, c.row});
}

} // anonymous namespace

//==============================================================================
json to_json(const nav::Path& path)
{
  json segments = json::array();
  for (const auto& s : path.segments)
  {
    json waypoints = json::array();
    for (const auto& c : s.waypoints)
      waypoints.push_back(cell_json(c));
    segments.push_back({{"floor", s.floor_id}, {"waypoints", waypoints}});
  }

  json transitions = json::array();
  for (const auto& t : path.transitions)
  {
    transitions.push_back({
        {"shaft", t.shaft_id},
        {"from", t.from_index},
        {"to", t.to_index}
      });
  }

  return {
    {"segments", segments},
    {"transitions", transitions},
    {"total_cost", path.total_cost}
  };
}

//==============================================================================
json to_json(const TranscriptMsg& msg)
{
  json j = {{"text", msg.text}, {"timestamp_ms", msg.timestamp_ms}};
  if (msg.confidence)
    j["confidence"] = *msg.confidence;
  return j;
}

//==============================================================================
json to_json(const GoalMsg& msg)
{
  return {
    {"location_id", msg.location_id},
    {"floor", msg.pose.floor_id},
    {"cell", cell_json(msg.pose.cell)},
    {"heading_rad", msg.pose.heading}
  };
}

//==============================================================================
json to_json(const SpeechOutMsg& msg)
{
  return {{"text", msg.text}};
}

//==============================================================================
json to_json(const StateMsg& msg)
{
  json j = {
    {"floor_id", msg.floor_id},
    {"cell", cell_json(msg.cell)},
    {"heading_rad", msg.heading_rad},
    {"status", to_string(msg.status)}
  };
  if (msg.goal_location_id)
    j["goal_location_id"] = *msg.goal_location_id;
  if (msg.path)
    j["path"] = to_json(*msg.path);
  return j;
}

//==============================================================================
json to_json(const StopMsg&)
{
  return json::object();
}

//==============================================================================
json to_json(const Payload& payload)
{
  return std::visit([](const auto& msg) { return to_json(msg); }, payload);
}

} // namespace guidebot
