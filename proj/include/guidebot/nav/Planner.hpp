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

#ifndef GUIDEBOT__NAV__PLANNER_HPP
#define GUIDEBOT__NAV__PLANNER_HPP

#include <guidebot/nav/SiteMap.hpp>

#include <optional>
#include <string>
#include <vector>

namespace guidebot {
namespace nav {

//==============================================================================
struct FloorPlan
{
  /// First element is the start cell, last element is the goal cell.
  std::vector<Cell> waypoints;
  double cost = 0.0;
};

/// Cost-optimal 8-connected path on one floor using octile-distance A*.
///
/// Straight steps cost 1 and diagonal steps cost sqrt(2). A diagonal step is
/// refused when both orthogonal cells it passes between are occupied. Among
/// equal-cost frontier entries the smaller (row, col) cell is expanded first,
/// so results are reproducible.
///
/// Returns std::nullopt when the goal is unreachable or when either endpoint
/// is occupied or out of bounds.
std::optional<FloorPlan> plan_floor(
  const FloorGrid& grid,
  Cell start,
  Cell goal);

/// Cost of one move between 8-adjacent cells, or std::nullopt if the move is
/// not allowed on this grid.
std::optional<double> step_cost(const FloorGrid& grid, Cell from, Cell to);

//==============================================================================
struct PathSegment
{
  std::string floor_id;
  std::vector<Cell> waypoints;

  friend bool operator==(const PathSegment&, const PathSegment&) = default;
};

struct PathTransition
{
  std::string shaft_id;
  /// Index of the segment the ride starts from.
  std::size_t from_index = 0;
  /// Index of the segment the ride ends in.
  std::size_t to_index = 0;

  friend bool operator==(const PathTransition&, const PathTransition&) =
  default;
};

struct Path
{
  std::vector<PathSegment> segments;
  std::vector<PathTransition> transitions;
  double total_cost = 0.0;

  std::size_t waypoint_count() const;

  /// All waypoints in travel order, each qualified by its floor.
  std::vector<FloorCell> flatten() const;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Plans from a floor-qualified start to a goal pose.
///
/// When both lie on the same floor and a direct route exists, the result is
/// the single-segment plan_floor() route. Otherwise the cheapest route over
/// the floor graph is returned, where each elevator ride between two stops of
/// one shaft costs site.elevator_cost().
std::optional<Path> plan_path(
  const SiteMap& site,
  const FloorCell& start,
  const GoalPose& goal);

/// Checks every Path invariant against the site. Returns a description of the
/// first violation, or std::nullopt if the path is valid.
std::optional<std::string> validate_path(const SiteMap& site, const Path& path);

} // namespace nav
} // namespace guidebot

#endif // GUIDEBOT__NAV__PLANNER_HPP
