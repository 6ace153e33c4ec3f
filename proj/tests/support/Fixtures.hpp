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

#ifndef GUIDEBOT__TESTS__FIXTURES_HPP
#define GUIDEBOT__TESTS__FIXTURES_HPP

#include "DijkstraOracle.hpp"

#include <guidebot/nav/SiteMap.hpp>
#include <guidebot/sim/Robot.hpp>
#include <guidebot/speech/Lexicon.hpp>

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace fixtures {

inline std::string data_path(const std::string& name)
{
  return std::string(GUIDEBOT_DATA_DIR) + "/" + name;
}

inline std::string read_text(const std::string& path)
{
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json site_json()
{
  return nlohmann::json::parse(read_text(data_path("two_floor_site.json")));
}

inline std::shared_ptr<const guidebot::nav::SiteMap> two_floor_site()
{
  return std::make_shared<const guidebot::nav::SiteMap>(
    guidebot::nav::load_site_map_file(data_path("two_floor_site.json")));
}

inline guidebot::speech::LexiconFile lexicon()
{
  return guidebot::speech::load_lexicon_file(data_path("lexicon.json"));
}

inline guidebot::sim::SimConfig sim_config(
  const guidebot::nav::SiteMap& site, int cells_per_tick = 1)
{
  const auto start = site.default_start();
  guidebot::sim::SimConfig cfg;
  cfg.cells_per_tick = cells_per_tick;
  cfg.start = {start.floor_id, start.cell};
  cfg.start_heading = start.heading;
  return cfg;
}

inline guidebot::nav::FloorGrid to_floor(const oracle::Grid& g,
  const std::string& id = "f")
{
  std::vector<std::uint8_t> mask(g.occupied.size());
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask[i] = g.occupied[i] ? 1 : 0;
  return guidebot::nav::FloorGrid(id, g.width, g.height, 1.0, std::move(mask));
}

inline oracle::Grid to_oracle(const guidebot::nav::FloorGrid& f)
{
  oracle::Grid g{f.width(), f.height(),
    std::vector<bool>(static_cast<std::size_t>(f.width() * f.height()))};
  for (int r = 0; r < f.height(); ++r)
  {
    for (int c = 0; c < f.width(); ++c)
      g.occupied[static_cast<std::size_t>(r * f.width() + c)] =
        f.is_occupied({c, r});
  }
  return g;
}

} // namespace fixtures

#endif // GUIDEBOT__TESTS__FIXTURES_HPP
