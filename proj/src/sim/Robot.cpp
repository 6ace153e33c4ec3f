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

#include <guidebot/sim/Robot.hpp>

#include <guidebot/Error.hpp>

#include <cmath>
#include <numbers>

namespace guidebot {
namespace sim {

namespace {

std::string spoken_name(const nav::SiteMap& site, const std::string& id)
{
  const auto it = site.locations().find(id);
  if (it == site.locations().end())
    return id;
  return it->second.display_name;
}

double heading_of(nav::Cell from, nav::Cell to)
{
  double h = std::atan2(
    static_cast<double>(to.row - from.row),
    static_cast<double>(to.col - from.col));
  if (h < 0.0)
    h += 2.0 * std::numbers::pi;
  return h;
}

} // anonymous namespace

//==============================================================================
MotionStatus RobotState::motion() const
{
  if (std::holds_alternative<Navigating>(status))
    return MotionStatus::Navigating;
  if (std::holds_alternative<Stopped>(status))
    return MotionStatus::Stopped;
  return MotionStatus::Idle;
}

//==============================================================================
StateMsg RobotState::to_msg() const
{
  StateMsg msg;
  msg.floor_id = floor_id;
  msg.cell = cell;
  msg.heading_rad = heading;
  msg.status = motion();
  if (const auto* nav = std::get_if<Navigating>(&status))
  {
    msg.goal_location_id = nav->location_id;
    msg.path = nav->path;
  }
  return msg;
}

//==============================================================================
void SimConfig::validate(const nav::SiteMap& site) const
{
  if (tick.count() <= 0)
    throw ValidationError("tick must be positive");
  if (cells_per_tick <= 0)
    throw ValidationError("cells_per_tick must be positive");
  if (!site.is_free(start.floor_id, start.cell))
  {
    throw ValidationError(
      "start cell [" + std::to_string(start.cell.col) + ","
      + std::to_string(start.cell.row) + "] on floor [" + start.floor_id
      + "] is not free");
  }
}

//==============================================================================
RobotState initial_state(const SimConfig& cfg)
{
  RobotState state;
  state.floor_id = cfg.start.floor_id;
  state.cell = cfg.start.cell;
  state.heading = cfg.start_heading;
  state.status = Idle{};
  return state;
}

//==============================================================================
RobotState on_goal(
  RobotState state,
  const GoalMsg& goal,
  const nav::SiteMap& site,
  msgbus::Bus& bus)
{
  auto path = nav::plan_path(site, {state.floor_id, state.cell}, goal.pose);
  if (!path)
  {
    bus.publish(msgbus::topics::Say, SpeechOutMsg{
        "Sorry, I cannot reach the " + spoken_name(site, goal.location_id)
        + "."});
    return state;
  }

  const std::size_t count = path->waypoint_count();
  state.status = Navigating{
    goal.location_id,
    goal.pose,
    std::move(*path),
    count > 1 ? 1u : count
  };
  return state;
}

//==============================================================================
RobotState on_stop(RobotState state)
{
  state.status = Stopped{};
  return state;
}

//==============================================================================
RobotState tick(
  RobotState state,
  const SimConfig& cfg,
  const nav::SiteMap& site,
  msgbus::Bus& bus)
{
  if (auto* nav = std::get_if<Navigating>(&state.status))
  {
    const auto cells = nav->path.flatten();
    int budget = cfg.cells_per_tick;

    while (nav->next_waypoint_index < cells.size())
    {
      const auto& next = cells[nav->next_waypoint_index];
      if (next.floor_id != state.floor_id)
      {
        // Elevator ride between shaft stops.
        state.floor_id = next.floor_id;
        state.cell = next.cell;
        ++nav->next_waypoint_index;
        continue;
      }

      if (budget == 0)
        break;

      if (next.cell != state.cell)
        state.heading = heading_of(state.cell, next.cell);
      state.cell = next.cell;
      ++nav->next_waypoint_index;
      --budget;
    }

    if (nav->next_waypoint_index >= cells.size())
    {
      const std::string name = spoken_name(site, nav->location_id);
      state.heading = nav->goal.heading;
      state.status = Idle{};
      bus.publish(msgbus::topics::Say,
        SpeechOutMsg{"You have arrived at the " + name + "."});
    }
  }

  bus.publish(msgbus::topics::State, state.to_msg());
  return state;
}

} // namespace sim
} // namespace guidebot
