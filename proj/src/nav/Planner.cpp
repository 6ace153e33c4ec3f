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

#include <guidebot/nav/Planner.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <tuple>

namespace guidebot {
namespace nav {

namespace {

constexpr double Diagonal = std::numbers::sqrt2;
constexpr double Inf = std::numeric_limits<double>::infinity();

// Improvements smaller than this are treated as ties so the first route found
// among equal-cost optima is kept.
constexpr double CostEpsilon = 1e-9;

// Successor order, sorted by (row, col) offset.
constexpr std::array<std::pair<int, int>, 8> Neighbors = {{
  {-1, -1}, {0, -1}, {1, -1},
  {-1, 0}, {1, 0},
  {-1, 1}, {0, 1}, {1, 1}
}};

double octile(Cell a, Cell b)
{
  const double dx = std::abs(a.col - b.col);
  const double dy = std::abs(a.row - b.row);
  return (dx + dy) + (Diagonal - 2.0) * std::min(dx, dy);
}

struct Frontier
{
  double f;
  double g;
  Cell cell;
};

struct FrontierOrder
{
  // std::priority_queue pops the largest element, so "greater" means
  // "expanded later".
  bool operator()(const Frontier& a, const Frontier& b) const
  {
    if (a.f != b.f)
      return a.f > b.f;
    return b.cell < a.cell;
  }
};

} // anonymous namespace

//==============================================================================
std::optional<double> step_cost(const FloorGrid& grid, Cell from, Cell to)
{
  const int dc = to.col - from.col;
  const int dr = to.row - from.row;
  if (std::abs(dc) > 1 || std::abs(dr) > 1 || (dc == 0 && dr == 0))
    return std::nullopt;

  if (grid.is_occupied(from) || grid.is_occupied(to))
    return std::nullopt;

  if (dc != 0 && dr != 0)
  {
    const bool side_a = grid.is_occupied({from.col + dc, from.row});
    const bool side_b = grid.is_occupied({from.col, from.row + dr});
    if (side_a && side_b)
      return std::nullopt;
    return Diagonal;
  }

  return 1.0;
}

//==============================================================================
std::optional<FloorPlan> plan_floor(
  const FloorGrid& grid,
  Cell start,
  Cell goal)
{
  if (grid.is_occupied(start) || grid.is_occupied(goal))
    return std::nullopt;

  if (start == goal)
    return FloorPlan{{start}, 0.0};

  const std::size_t w = static_cast<std::size_t>(grid.width());
  const std::size_t n = w * static_cast<std::size_t>(grid.height());
  const auto index = [w](Cell c)
    {
      return static_cast<std::size_t>(c.row) * w
        + static_cast<std::size_t>(c.col);
    };

  std::vector<double> g(n, Inf);
  std::vector<std::uint8_t> closed(n, 0);
  std::vector<Cell> parent(n, Cell{-1, -1});

  std::priority_queue<Frontier, std::vector<Frontier>, FrontierOrder> open;
  g[index(start)] = 0.0;
  open.push({octile(start, goal), 0.0, start});

  while (!open.empty())
  {
    const Frontier top = open.top();
    open.pop();

    const std::size_t i = index(top.cell);
    if (closed[i] || top.g > g[i])
      continue;
    closed[i] = 1;

    if (top.cell == goal)
      break;

    for (const auto& [dc, dr] : Neighbors)
    {
      const Cell next{top.cell.col + dc, top.cell.row + dr};
      if (!grid.in_bounds(next))
        continue;

      const std::size_t j = index(next);
      if (closed[j])
        continue;

      const auto cost = step_cost(grid, top.cell, next);
      if (!cost)
        continue;

      const double candidate = top.g + *cost;
      if (candidate + CostEpsilon < g[j])
      {
        g[j] = candidate;
        parent[j] = top.cell;
        open.push({candidate + octile(next, goal), candidate, next});
      }
    }
  }

  if (!closed[index(goal)])
    return std::nullopt;

  FloorPlan plan;
  plan.cost = g[index(goal)];
  for (Cell c = goal; c != start; c = parent[index(c)])
    plan.waypoints.push_back(c);
  plan.waypoints.push_back(start);
  std::reverse(plan.waypoints.begin(), plan.waypoints.end());
  return plan;
}

//==============================================================================
std::size_t Path::waypoint_count() const
{
  std::size_t count = 0;
  for (const auto& s : segments)
    count += s.waypoints.size();
  return count;
}

//==============================================================================
std::vector<FloorCell> Path::flatten() const
{
  std::vector<FloorCell> cells;
  cells.reserve(waypoint_count());
  for (const auto& s : segments)
  {
    for (const auto& c : s.waypoints)
      cells.push_back({s.floor_id, c});
  }
  return cells;
}

//==============================================================================
namespace {

// Node of the floor graph used for cross-floor routing.
struct RouteNode
{
  std::string floor_id;
  Cell cell;
  // Index into SiteMap::shafts(), or npos for the start and goal nodes.
  std::size_t shaft = std::string::npos;
};

class LegCache
{
public:
  explicit LegCache(const SiteMap& site)
  : _site(site)
  {
    // Do nothing
  }

  const std::optional<FloorPlan>& get(
    const std::string& floor_id, Cell a, Cell b)
  {
    const auto key = std::make_tuple(floor_id, a.col, a.row, b.col, b.row);
    auto it = _cache.find(key);
    if (it == _cache.end())
    {
      it = _cache.emplace(
        key, plan_floor(*_site.floor(floor_id), a, b)).first;
    }
    return it->second;
  }

private:
  const SiteMap& _site;
  std::map<std::tuple<std::string, int, int, int, int>,
    std::optional<FloorPlan>> _cache;
};

} // anonymous namespace

//==============================================================================
std::optional<Path> plan_path(
  const SiteMap& site,
  const FloorCell& start,
  const GoalPose& goal)
{
  if (!site.is_free(start.floor_id, start.cell)
    || !site.is_free(goal.floor_id, goal.cell))
    return std::nullopt;

  if (start.floor_id == goal.floor_id)
  {
    auto direct = plan_floor(
      *site.floor(start.floor_id), start.cell, goal.cell);
    if (direct)
    {
      Path path;
      path.segments.push_back({start.floor_id, std::move(direct->waypoints)});
      path.total_cost = direct->cost;
      return path;
    }
  }

  // Node 0 is the start, node 1 is the goal, the rest are shaft stops.
  std::vector<RouteNode> nodes;
  nodes.push_back({start.floor_id, start.cell});
  nodes.push_back({goal.floor_id, goal.cell});
  for (std::size_t s = 0; s < site.shafts().size(); ++s)
  {
    for (const auto& stop : site.shafts()[s].stops)
      nodes.push_back({stop.floor_id, stop.cell, s});
  }

  LegCache legs(site);
  const std::size_t n = nodes.size();
  std::vector<double> dist(n, Inf);
  std::vector<std::size_t> prev(n, std::string::npos);
  std::vector<std::uint8_t> done(n, 0);
  dist[0] = 0.0;

  // The node graph is small, so a linear scan for the minimum is enough.
  while (true)
  {
    std::size_t u = std::string::npos;
    for (std::size_t i = 0; i < n; ++i)
    {
      if (!done[i] && dist[i] < Inf && (u == std::string::npos
        || dist[i] < dist[u]))
        u = i;
    }

    if (u == std::string::npos || u == 1)
      break;
    done[u] = 1;

    for (std::size_t v = 1; v < n; ++v)
    {
      if (done[v] || v == u)
        continue;

      double cost = Inf;
      if (nodes[u].floor_id == nodes[v].floor_id)
      {
        const auto& leg = legs.get(nodes[u].floor_id, nodes[u].cell,
            nodes[v].cell);
        if (leg)
          cost = leg->cost;
      }
      else if (nodes[u].shaft != std::string::npos
        && nodes[u].shaft == nodes[v].shaft)
      {
        cost = site.elevator_cost();
      }

      if (cost < Inf && dist[u] + cost + CostEpsilon < dist[v])
      {
        dist[v] = dist[u] + cost;
        prev[v] = u;
      }
    }
  }

  if (!(dist[1] < Inf))
    return std::nullopt;

  std::vector<std::size_t> route;
  for (std::size_t v = 1; v != std::string::npos; v = prev[v])
    route.push_back(v);
  std::reverse(route.begin(), route.end());

  Path path;
  path.segments.push_back({nodes[0].floor_id, {nodes[0].cell}});
  for (std::size_t k = 1; k < route.size(); ++k)
  {
    const auto& a = nodes[route[k-1]];
    const auto& b = nodes[route[k]];
    if (a.floor_id == b.floor_id)
    {
      const auto& leg = *legs.get(a.floor_id, a.cell, b.cell);
      auto& wps = path.segments.back().waypoints;
      wps.insert(wps.end(), leg.waypoints.begin() + 1, leg.waypoints.end());
      path.total_cost += leg.cost;
    }
    else
    {
      const std::size_t from = path.segments.size() - 1;
      path.segments.push_back({b.floor_id, {b.cell}});
      path.transitions.push_back(
        {site.shafts()[a.shaft].shaft_id, from, from + 1});
      path.total_cost += site.elevator_cost();
    }
  }

  return path;
}

//==============================================================================
std::optional<std::string> validate_path(const SiteMap& site, const Path& path)
{
  if (path.segments.empty())
    return "path has no segments";

  double cost = 0.0;
  for (std::size_t s = 0; s < path.segments.size(); ++s)
  {
    const auto& seg = path.segments[s];
    const std::string where = "segment " + std::to_string(s);
    const auto* grid = site.floor(seg.floor_id);
    if (!grid)
      return where + " is on unknown floor [" + seg.floor_id + "]";

    if (seg.waypoints.empty())
      return where + " has no waypoints";

    for (std::size_t k = 0; k < seg.waypoints.size(); ++k)
    {
      if (!grid->is_free(seg.waypoints[k]))
      {
        return where + " waypoint " + std::to_string(k)
          + " is occupied or out of bounds";
      }

      if (k > 0)
      {
        const auto step = step_cost(*grid, seg.waypoints[k-1], seg.waypoints[k]);
        if (!step)
        {
          return where + " waypoints " + std::to_string(k-1) + " and "
            + std::to_string(k) + " are not joined by an allowed move";
        }
        cost += *step;
      }
    }
  }

  if (path.transitions.size() + 1 != path.segments.size())
    return "path needs exactly one transition between consecutive segments";

  for (std::size_t t = 0; t < path.transitions.size(); ++t)
  {
    const auto& tr = path.transitions[t];
    const std::string where = "transition " + std::to_string(t);
    if (tr.from_index != t || tr.to_index != t + 1)
      return where + " does not link consecutive segments";

    const auto shaft = std::find_if(site.shafts().begin(), site.shafts().end(),
        [&](const ElevatorShaft& s) { return s.shaft_id == tr.shaft_id; });
    if (shaft == site.shafts().end())
      return where + " uses unknown shaft [" + tr.shaft_id + "]";

    const auto& before = path.segments[tr.from_index];
    const auto& after = path.segments[tr.to_index];
    if (before.floor_id == after.floor_id)
      return where + " does not change floor";

    const auto* departure = shaft->stop_on(before.floor_id);
    const auto* arrival = shaft->stop_on(after.floor_id);
    if (!departure || departure->cell != before.waypoints.back())
      return where + " does not depart from the shaft stop";
    if (!arrival || arrival->cell != after.waypoints.front())
      return where + " does not arrive at the shaft stop";

    cost += site.elevator_cost();
  }

  if (std::abs(cost - path.total_cost) > 1e-9)
  {
    return "total_cost " + std::to_string(path.total_cost)
      + " does not match the sum of step and transition costs "
      + std::to_string(cost);
  }

  return std::nullopt;
}

} // namespace nav
} // namespace guidebot
