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

#ifndef GUIDEBOT__SIM__ROBOT_HPP
#define GUIDEBOT__SIM__ROBOT_HPP

#include <guidebot/msgbus/Bus.hpp>
#include <guidebot/nav/Planner.hpp>
#include <guidebot/nav/SiteMap.hpp>

#include <chrono>
#include <string>
#include <variant>

namespace guidebot {
namespace sim {

//==============================================================================
struct Idle
{
  friend bool operator==(const Idle&, const Idle&) = default;
};

struct Stopped
{
  friend bool operator==(const Stopped&, const Stopped&) = default;
};

struct Navigating
{
  std::string location_id;
  nav::GoalPose goal;
  nav::Path path;
  /// Index into path.flatten() of the next waypoint to reach. Waypoints
  /// before it have been reached; the robot stands on the one just before.
  std::size_t next_waypoint_index = 1;

  friend bool operator==(const Navigating&, const Navigating&) = default;
};

using Status = std::variant<Idle, Navigating, Stopped>;

struct RobotState
{
  std::string floor_id;
  nav::Cell cell;
  double heading = 0.0;
  Status status = Idle{};

  MotionStatus motion() const;

  /// Snapshot for robot.state. The path is included while navigating.
  StateMsg to_msg() const;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

//==============================================================================
struct SimConfig
{
  std::chrono::milliseconds tick{100};
  int cells_per_tick = 1;
  nav::FloorCell start;
  double start_heading = 0.0;

  /// Throws ValidationError if the tick or speed is not positive or the start
  /// cell is not free on the site.
  void validate(const nav::SiteMap& site) const;
};

/// Idle at the configured start.
RobotState initial_state(const SimConfig& cfg);

/// Replans from the current cell toward the goal, replacing any active path.
/// An unreachable goal leaves the state unchanged and publishes an apology on
/// speech.say.
RobotState on_goal(
  RobotState state,
  const GoalMsg& goal,
  const nav::SiteMap& site,
  msgbus::Bus& bus);

/// Holds at the current cell. Also valid from Idle and Stopped.
RobotState on_stop(RobotState state);

/// Moves up to cells_per_tick waypoints. Elevator rides between consecutive
/// segments happen within the same tick and do not use up movement. Arrival
/// adopts the goal heading, announces itself on speech.say and returns to
/// Idle. Every call publishes the resulting state on robot.state.
RobotState tick(
  RobotState state,
  const SimConfig& cfg,
  const nav::SiteMap& site,
  msgbus::Bus& bus);

} // namespace sim
} // namespace guidebot

#endif // GUIDEBOT__SIM__ROBOT_HPP
