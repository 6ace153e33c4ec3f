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

#include <guidebot/nav/SiteMap.hpp>

#include <guidebot/Error.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace guidebot {
namespace nav {

namespace {

std::string describe(Cell c)
{
  return "[" + std::to_string(c.col) + "," + std::to_string(c.row) + "]";
}

} // anonymous namespace

//==============================================================================
FloorGrid::FloorGrid(
  std::string floor_id,
  int width,
  int height,
  double resolution_m,
  const std::vector<std::string>& occupied_rows)
: _floor_id(std::move(floor_id)),
  _width(width),
  _height(height),
  _resolution(resolution_m)
{
  if (width <= 0 || height <= 0)
  {
    throw ValidationError(
      "floor [" + _floor_id + "]: width and height must be positive");
  }

  if (occupied_rows.size() != static_cast<std::size_t>(height))
  {
    throw ValidationError(
      "floor [" + _floor_id + "]: occupied_rows has "
      + std::to_string(occupied_rows.size()) + " rows, expected "
      + std::to_string(height));
  }

  _occupied.reserve(static_cast<std::size_t>(width) * height);
  for (std::size_t r = 0; r < occupied_rows.size(); ++r)
  {
    const auto& row = occupied_rows[r];
    if (row.size() != static_cast<std::size_t>(width))
    {
      throw ValidationError(
        "floor [" + _floor_id + "]: occupied_rows[" + std::to_string(r)
        + "] has length " + std::to_string(row.size()) + ", expected "
        + std::to_string(width));
    }

    for (const char ch : row)
    {
      if (ch != '0' && ch != '1')
      {
        throw ValidationError(
          "floor [" + _floor_id + "]: occupied_rows[" + std::to_string(r)
          + "] contains '" + std::string(1, ch) + "', expected '0' or '1'");
      }
      _occupied.push_back(ch == '1' ? 1 : 0);
    }
  }

  check_invariants();
}

//==============================================================================
FloorGrid::FloorGrid(
  std::string floor_id,
  int width,
  int height,
  double resolution_m,
  std::vector<std::uint8_t> occupied)
: _floor_id(std::move(floor_id)),
  _width(width),
  _height(height),
  _resolution(resolution_m),
  _occupied(std::move(occupied))
{
  if (width <= 0 || height <= 0)
  {
    throw ValidationError(
      "floor [" + _floor_id + "]: width and height must be positive");
  }

  if (_occupied.size() != static_cast<std::size_t>(width) * height)
    throw ValidationError("floor [" + _floor_id + "]: mask size mismatch");

  check_invariants();
}

//==============================================================================
void FloorGrid::check_invariants() const
{
  if (_floor_id.empty())
    throw ValidationError("floor id must not be empty");

  if (!(_resolution > 0.0) || !std::isfinite(_resolution))
  {
    throw ValidationError(
      "floor [" + _floor_id + "]: resolution_m must be positive");
  }

  if (free_cell_count() == 0)
    throw ValidationError("floor [" + _floor_id + "]: has no free cell");
}

//==============================================================================
void FloorGrid::set_occupied(Cell c, bool occupied)
{
  if (!in_bounds(c))
    throw ValidationError("cell " + describe(c) + " is out of bounds");
  _occupied[index(c)] = occupied ? 1 : 0;
}

//==============================================================================
std::size_t FloorGrid::free_cell_count() const
{
  std::size_t count = 0;
  for (const auto v : _occupied)
    count += (v == 0);
  return count;
}

//==============================================================================
std::vector<std::string> FloorGrid::occupied_rows() const
{
  std::vector<std::string> rows;
  rows.reserve(static_cast<std::size_t>(_height));
  for (int r = 0; r < _height; ++r)
  {
    std::string row;
    row.reserve(static_cast<std::size_t>(_width));
    for (int c = 0; c < _width; ++c)
      row.push_back(is_occupied({c, r}) ? '1' : '0');
    rows.push_back(std::move(row));
  }
  return rows;
}

//==============================================================================
const ShaftStop* ElevatorShaft::stop_on(std::string_view floor_id) const
{
  for (const auto& stop : stops)
  {
    if (stop.floor_id == floor_id)
      return &stop;
  }
  return nullptr;
}

//==============================================================================
SiteMap::SiteMap(
  std::vector<FloorGrid> floors,
  std::map<std::string, Location> locations,
  std::vector<ElevatorShaft> shafts,
  double elevator_cost,
  std::optional<GoalPose> start)
: _locations(std::move(locations)),
  _shafts(std::move(shafts)),
  _elevator_cost(elevator_cost),
  _start(std::move(start))
{
  if (floors.empty())
    throw ValidationError("site must contain at least one floor");

  for (auto& f : floors)
  {
    const std::string id = f.floor_id();
    if (!_floors.emplace(id, std::move(f)).second)
      throw ValidationError("floor [" + id + "] is defined more than once");
    _floor_order.push_back(id);
  }

  validate();
}

//==============================================================================
const FloorGrid* SiteMap::floor(std::string_view floor_id) const
{
  const auto it = _floors.find(std::string(floor_id));
  if (it == _floors.end())
    return nullptr;
  return &it->second;
}

//==============================================================================
bool SiteMap::is_free(const std::string& floor_id, Cell cell) const
{
  const auto* f = floor(floor_id);
  return f && f->is_free(cell);
}

//==============================================================================
SiteMap SiteMap::without_shaft(std::string_view shaft_id) const
{
  std::vector<ElevatorShaft> shafts;
  bool found = false;
  for (const auto& s : _shafts)
  {
    if (s.shaft_id == shaft_id)
    {
      found = true;
      continue;
    }
    shafts.push_back(s);
  }

  if (!found)
    throw ValidationError("shaft [" + std::string(shaft_id) + "] not found");

  std::vector<FloorGrid> floors;
  for (const auto& id : _floor_order)
    floors.push_back(_floors.at(id));

  return SiteMap(std::move(floors), _locations, std::move(shafts),
      _elevator_cost, _start);
}

//==============================================================================
GoalPose SiteMap::default_start() const
{
  if (_start)
    return *_start;

  const auto& first = _floors.at(_floor_order.front());
  for (int r = 0; r < first.height(); ++r)
  {
    for (int c = 0; c < first.width(); ++c)
    {
      if (first.is_free({c, r}))
        return GoalPose{first.floor_id(), {c, r}, 0.0};
    }
  }

  // Unreachable: every floor has at least one free cell.
  throw ValidationError("first floor has no free cell");
}

//==============================================================================
void SiteMap::validate() const
{
  if (!(_elevator_cost >= 0.0) || !std::isfinite(_elevator_cost))
    throw ValidationError("elevator_cost must be a nonnegative number");

  for (const auto& [id, loc] : _locations)
  {
    if (id.empty())
      throw ValidationError("location id must not be empty");

    const auto* f = floor(loc.pose.floor_id);
    if (!f)
    {
      throw ValidationError(
        "location [" + id + "] references unknown floor ["
        + loc.pose.floor_id + "]");
    }

    if (!f->in_bounds(loc.pose.cell))
    {
      throw ValidationError(
        "location [" + id + "] cell " + describe(loc.pose.cell)
        + " is out of bounds on floor [" + loc.pose.floor_id + "]");
    }

    if (f->is_occupied(loc.pose.cell))
    {
      throw ValidationError(
        "location [" + id + "] cell " + describe(loc.pose.cell)
        + " is occupied on floor [" + loc.pose.floor_id + "]");
    }

    const double h = loc.pose.heading;
    if (!(h >= 0.0 && h < 2.0 * std::numbers::pi))
    {
      throw ValidationError(
        "location [" + id + "] heading_rad must lie in [0, 2pi)");
    }
  }

  if (_start)
  {
    if (!is_free(_start->floor_id, _start->cell))
    {
      throw ValidationError(
        "start cell " + describe(_start->cell) + " on floor ["
        + _start->floor_id + "] is not a free cell of an existing floor");
    }

    const double h = _start->heading;
    if (!(h >= 0.0 && h < 2.0 * std::numbers::pi))
      throw ValidationError("start heading_rad must lie in [0, 2pi)");
  }

  std::set<std::string> shaft_ids;
  for (const auto& shaft : _shafts)
  {
    if (shaft.shaft_id.empty())
      throw ValidationError("shaft id must not be empty");

    if (!shaft_ids.insert(shaft.shaft_id).second)
    {
      throw ValidationError(
        "shaft [" + shaft.shaft_id + "] is defined more than once");
    }

    if (shaft.stops.size() < 2)
    {
      throw ValidationError(
        "shaft [" + shaft.shaft_id + "] must have at least 2 stops, has "
        + std::to_string(shaft.stops.size()));
    }

    std::set<std::string> served;
    for (const auto& stop : shaft.stops)
    {
      const auto* f = floor(stop.floor_id);
      if (!f)
      {
        throw ValidationError(
          "shaft [" + shaft.shaft_id + "] stop references unknown floor ["
          + stop.floor_id + "]");
      }

      if (!served.insert(stop.floor_id).second)
      {
        throw ValidationError(
          "shaft [" + shaft.shaft_id + "] has more than one stop on floor ["
          + stop.floor_id + "]");
      }

      if (f->is_occupied(stop.cell))
      {
        throw ValidationError(
          "shaft [" + shaft.shaft_id + "] stop cell " + describe(stop.cell)
          + " is occupied or out of bounds on floor [" + stop.floor_id + "]");
      }
    }
  }
}

//==============================================================================
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where)
{
  if (!obj.is_object())
    throw SchemaError(where + ": expected an object");

  const auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

template<typename T>
T get_as(const json& value, const std::string& where)
{
  try
  {
    return value.get<T>();
  }
  catch (const json::exception&)
  {
    throw SchemaError(where + ": wrong type");
  }
}

int get_int(const json& value, const std::string& where)
{
  if (!value.is_number_integer())
    throw SchemaError(where + ": expected an integer");
  return value.get<int>();
}

double get_number(const json& value, const std::string& where)
{
  if (!value.is_number())
    throw SchemaError(where + ": expected a number");
  return value.get<double>();
}

std::string get_string(const json& value, const std::string& where)
{
  if (!value.is_string())
    throw SchemaError(where + ": expected a string");
  return value.get<std::string>();
}

const json& get_array(const json& value, const std::string& where)
{
  if (!value.is_array())
    throw SchemaError(where + ": expected an array");
  return value;
}

Cell get_cell(const json& value, const std::string& where)
{
  if (!value.is_array() || value.size() != 2)
    throw SchemaError(where + ": expected [col, row]");
  return {get_int(value[0], where + "[0]"), get_int(value[1], where + "[1]")};
}

} // anonymous namespace

//==============================================================================
SiteMap load_site_map(const nlohmann::json& doc)
{
  if (!doc.is_object())
    throw SchemaError("map: expected a JSON object");

  std::vector<FloorGrid> floors;
  const auto& floors_json = get_array(require(doc, "floors", "map"), "floors");
  for (std::size_t i = 0; i < floors_json.size(); ++i)
  {
    const std::string where = "floors[" + std::to_string(i) + "]";
    const auto& f = floors_json[i];
    const auto id = get_string(require(f, "id", where), where + ".id");
    const int width = get_int(require(f, "width", where), where + ".width");
    const int height = get_int(require(f, "height", where), where + ".height");
    const double resolution = get_number(
      require(f, "resolution_m", where), where + ".resolution_m");

    std::vector<std::string> rows;
    const auto& rows_json = get_array(
      require(f, "occupied_rows", where), where + ".occupied_rows");
    for (std::size_t r = 0; r < rows_json.size(); ++r)
    {
      rows.push_back(get_string(
          rows_json[r], where + ".occupied_rows[" + std::to_string(r) + "]"));
    }

    floors.emplace_back(id, width, height, resolution, rows);
  }

  std::map<std::string, Location> locations;
  if (const auto it = doc.find("locations"); it != doc.end())
  {
    const auto& locs = get_array(*it, "locations");
    for (std::size_t i = 0; i < locs.size(); ++i)
    {
      const std::string where = "locations[" + std::to_string(i) + "]";
      const auto& l = locs[i];
      const auto id = get_string(require(l, "id", where), where + ".id");

      Location loc;
      loc.display_name = l.contains("display_name") ?
        get_string(l["display_name"], where + ".display_name") : id;
      loc.pose.floor_id = get_string(
        require(l, "floor", where), where + ".floor");
      loc.pose.cell = get_cell(require(l, "cell", where), where + ".cell");
      loc.pose.heading = l.contains("heading_rad") ?
        get_number(l["heading_rad"], where + ".heading_rad") : 0.0;

      if (!locations.emplace(id, std::move(loc)).second)
        throw ValidationError("location [" + id + "] is defined more than once");
    }
  }

  std::vector<ElevatorShaft> shafts;
  if (const auto it = doc.find("shafts"); it != doc.end())
  {
    const auto& shafts_json = get_array(*it, "shafts");
    for (std::size_t i = 0; i < shafts_json.size(); ++i)
    {
      const std::string where = "shafts[" + std::to_string(i) + "]";
      const auto& s = shafts_json[i];
      ElevatorShaft shaft;
      shaft.shaft_id = get_string(require(s, "id", where), where + ".id");
      const auto& stops = get_array(
        require(s, "stops", where), where + ".stops");
      for (std::size_t k = 0; k < stops.size(); ++k)
      {
        const std::string swhere = where + ".stops[" + std::to_string(k) + "]";
        ShaftStop stop;
        stop.floor_id = get_string(
          require(stops[k], "floor", swhere), swhere + ".floor");
        stop.cell = get_cell(
          require(stops[k], "cell", swhere), swhere + ".cell");
        shaft.stops.push_back(std::move(stop));
      }
      shafts.push_back(std::move(shaft));
    }
  }

  double elevator_cost = SiteMap::DefaultElevatorCost;
  if (const auto it = doc.find("elevator_cost"); it != doc.end())
    elevator_cost = get_number(*it, "elevator_cost");

  std::optional<GoalPose> start;
  if (const auto it = doc.find("start"); it != doc.end())
  {
    GoalPose pose;
    pose.floor_id = get_string(require(*it, "floor", "start"), "start.floor");
    pose.cell = get_cell(require(*it, "cell", "start"), "start.cell");
    pose.heading = it->contains("heading_rad") ?
      get_number((*it)["heading_rad"], "start.heading_rad") : 0.0;
    start = std::move(pose);
  }

  return SiteMap(
    std::move(floors), std::move(locations), std::move(shafts), elevator_cost,
    std::move(start));
}

//==============================================================================
SiteMap load_site_map(std::string_view text)
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw SchemaError(std::string("map: malformed JSON: ") + e.what());
  }
  return load_site_map(doc);
}

//==============================================================================
SiteMap load_site_map_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw SchemaError("cannot open map file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_site_map(std::string_view(ss.str()));
}

//==============================================================================
nlohmann::json to_json(const SiteMap& site)
{
  using nlohmann::json;
  json doc;

  doc["floors"] = json::array();
  for (const auto& id : site.floor_order())
  {
    const auto& f = site.floors().at(id);
    doc["floors"].push_back({
        {"id", f.floor_id()},
        {"width", f.width()},
        {"height", f.height()},
        {"resolution_m", f.resolution()},
        {"occupied_rows", f.occupied_rows()}
      });
  }

  doc["locations"] = json::array();
  for (const auto& [id, loc] : site.locations())
  {
    doc["locations"].push_back({
        {"id", id},
        {"display_name", loc.display_name},
        {"floor", loc.pose.floor_id},
        {"cell", {loc.pose.cell.col, loc.pose.cell.row}},
        {"heading_rad", loc.pose.heading}
      });
  }

  doc["shafts"] = json::array();
  for (const auto& shaft : site.shafts())
  {
    json stops = json::array();
    for (const auto& stop : shaft.stops)
    {
      stops.push_back({
          {"floor", stop.floor_id},
          {"cell", {stop.cell.col, stop.cell.row}}
        });
    }
    doc["shafts"].push_back({{"id", shaft.shaft_id}, {"stops", stops}});
  }

  doc["elevator_cost"] = site.elevator_cost();

  if (const auto& start = site.start())
  {
    doc["start"] = {
      {"floor", start->floor_id},
      {"cell", {start->cell.col, start->cell.row}},
      {"heading_rad", start->heading}
    };
  }

  return doc;
}

//==============================================================================
const GoalPose& resolve_location(const SiteMap& site, std::string_view id)
{
  const auto it = site.locations().find(std::string(id));
  if (it == site.locations().end())
    throw UnknownLocation("unknown location [" + std::string(id) + "]");
  return it->second.pose;
}

//==============================================================================
const std::string& display_name(const SiteMap& site, std::string_view id)
{
  const auto it = site.locations().find(std::string(id));
  if (it == site.locations().end())
    throw UnknownLocation("unknown location [" + std::string(id) + "]");
  return it->second.display_name;
}

} // namespace nav
} // namespace guidebot
