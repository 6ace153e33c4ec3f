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

#ifndef GUIDEBOT__NAV__SITEMAP_HPP
#define GUIDEBOT__NAV__SITEMAP_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace guidebot {
namespace nav {

//==============================================================================
/// Integer grid coordinate. Column grows to the right, row grows downward,
/// row 0 is the first occupancy row in the map file.
struct Cell
{
  int col = 0;
  int row = 0;

  friend bool operator==(const Cell&, const Cell&) = default;

  /// Orders by row first, then column.
  friend std::strong_ordering operator<=>(const Cell& a, const Cell& b)
  {
    if (auto c = a.row <=> b.row; c != 0)
      return c;
    return a.col <=> b.col;
  }
};

/// A cell qualified by the floor it lies on.
struct FloorCell
{
  std::string floor_id;
  Cell cell;

  friend bool operator==(const FloorCell&, const FloorCell&) = default;
};

//==============================================================================
class FloorGrid
{
public:

  /// Rows are strings of '0' (free) and '1' (occupied), row 0 first.
  /// Throws ValidationError when dimensions or row contents are inconsistent.
  FloorGrid(
    std::string floor_id,
    int width,
    int height,
    double resolution_m,
    const std::vector<std::string>& occupied_rows);

  /// Builds a grid from a raw occupancy mask in row-major order.
  FloorGrid(
    std::string floor_id,
    int width,
    int height,
    double resolution_m,
    std::vector<std::uint8_t> occupied);

  const std::string& floor_id() const { return _floor_id; }
  int width() const { return _width; }
  int height() const { return _height; }
  double resolution() const { return _resolution; }

  bool in_bounds(Cell c) const
  {
    return c.col >= 0 && c.row >= 0 && c.col < _width && c.row < _height;
  }

  /// Out-of-bounds cells count as occupied.
  bool is_occupied(Cell c) const
  {
    return !in_bounds(c) || _occupied[index(c)] != 0;
  }

  bool is_free(Cell c) const { return !is_occupied(c); }

  void set_occupied(Cell c, bool occupied);

  std::size_t free_cell_count() const;

  /// Occupancy rows in the map-file encoding.
  std::vector<std::string> occupied_rows() const;

private:
  std::size_t index(Cell c) const
  {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(_width)
      + static_cast<std::size_t>(c.col);
  }

  void check_invariants() const;

  std::string _floor_id;
  int _width;
  int _height;
  double _resolution;
  std::vector<std::uint8_t> _occupied;
};

//==============================================================================
struct GoalPose
{
  std::string floor_id;
  Cell cell;
  /// Radians in [0, 2pi).
  double heading = 0.0;

  friend bool operator==(const GoalPose&, const GoalPose&) = default;
};

struct ShaftStop
{
  std::string floor_id;
  Cell cell;

  friend bool operator==(const ShaftStop&, const ShaftStop&) = default;
};

struct ElevatorShaft
{
  std::string shaft_id;
  std::vector<ShaftStop> stops;

  /// The stop this shaft has on the given floor, if any.
  const ShaftStop* stop_on(std::string_view floor_id) const;
};

struct Location
{
  std::string display_name;
  GoalPose pose;
};

//==============================================================================
/// Immutable multi-floor site description. Construct through load_site_map()
/// or through the validating constructor.
class SiteMap
{
public:

  static constexpr double DefaultElevatorCost = 5.0;

  /// Throws ValidationError naming the offending floor, location, shaft or
  /// cell when any site invariant is violated.
  SiteMap(
    std::vector<FloorGrid> floors,
    std::map<std::string, Location> locations,
    std::vector<ElevatorShaft> shafts,
    double elevator_cost = DefaultElevatorCost,
    std::optional<GoalPose> start = std::nullopt);

  const std::map<std::string, FloorGrid>& floors() const { return _floors; }
  const std::map<std::string, Location>& locations() const
  {
    return _locations;
  }
  const std::vector<ElevatorShaft>& shafts() const { return _shafts; }
  double elevator_cost() const { return _elevator_cost; }

  /// Where a robot starts when the map names a start pose.
  const std::optional<GoalPose>& start() const { return _start; }

  /// The named start pose, or the first free cell (row-major) of the first
  /// floor with heading 0.
  GoalPose default_start() const;

  /// nullptr when the floor does not exist.
  const FloorGrid* floor(std::string_view floor_id) const;

  /// Floor ids in map-file order.
  const std::vector<std::string>& floor_order() const { return _floor_order; }

  /// Free and in bounds on an existing floor.
  bool is_free(const std::string& floor_id, Cell cell) const;

  /// Returns a copy of this site with one shaft removed. Used for what-if
  /// planning; throws ValidationError if the shaft does not exist.
  SiteMap without_shaft(std::string_view shaft_id) const;

private:
  void validate() const;

  std::map<std::string, FloorGrid> _floors;
  std::vector<std::string> _floor_order;
  std::map<std::string, Location> _locations;
  std::vector<ElevatorShaft> _shafts;
  double _elevator_cost;
  std::optional<GoalPose> _start;
};

//==============================================================================
/// Parses and validates a map document. Throws SchemaError for structural
/// problems (missing field, wrong type) and ValidationError for violated site
/// invariants.
SiteMap load_site_map(const nlohmann::json& document);

/// Same as above, parsing the text first. Malformed JSON is a SchemaError.
SiteMap load_site_map(std::string_view text);

/// Reads and parses a map file.
SiteMap load_site_map_file(const std::string& path);

/// Serializes in the map-file schema. load_site_map(to_json(m)) reproduces m.
nlohmann::json to_json(const SiteMap& site);

/// Looks up the preset pose of a location. Ids are exact, case-sensitive
/// matches. Throws UnknownLocation.
const GoalPose& resolve_location(const SiteMap& site, std::string_view id);

/// Display name of a location. Throws UnknownLocation.
const std::string& display_name(const SiteMap& site, std::string_view id);

} // namespace nav
} // namespace guidebot

#endif // GUIDEBOT__NAV__SITEMAP_HPP
