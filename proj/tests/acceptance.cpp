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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include "support/DijkstraOracle.hpp"
#include "support/Fixtures.hpp"

#include <guidebot/gateway/Replay.hpp>
#include <guidebot/sim/Session.hpp>
#include <guidebot/speech/SpeechFlow.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

using namespace guidebot;
using nlohmann::json;

namespace {

constexpr double CostTolerance = 1e-9;
constexpr double ElevatorCost = 5.0;

constexpr auto Limit1 = std::chrono::milliseconds(1000);
constexpr auto Limit2 = std::chrono::milliseconds(5000);
constexpr auto Limit3 = std::chrono::milliseconds(30000);
constexpr auto NoLimit = std::chrono::milliseconds::max();

/// Thrown by check() with a description of the first violated expectation.
struct Violation
{
  std::string what;
};

void check(bool ok, const std::string& what)
{
  if (!ok)
    throw Violation{what};
}

//==============================================================================
const std::vector<gateway::ScriptStep> Conversation = {
  gateway::Utterance{"Hey A1, take me to the lab."},
  gateway::Utterance{"Take me to the office."},
  gateway::Utterance{"Hey A1, take me to the office."}
};

speech::Lexicon lab_office()
{
  return speech::Lexicon({{"lab", {{"lab"}}}, {"office", {{"office"}}}});
}

gateway::ReplayResult conversation(cloud::TtsClient* tts = nullptr)
{
  const auto site = fixtures::two_floor_site();
  gateway::ReplayOptions options;
  options.sim = fixtures::sim_config(*site);
  options.tts = tts;
  return gateway::run_replay(site, speech::WakeConfig("hey a1"),
      lab_office(), Conversation, options);
}

std::vector<json> of_kind(const gateway::ReplayResult& r, const char* kind)
{
  std::vector<json> out;
  for (const auto& e : r.events)
  {
    if (e["kind"] == kind)
      out.push_back(e);
  }
  return out;
}

/// Records published while handling each transcript, keyed by transcript seq.
std::map<std::uint64_t, std::vector<json>> handled_messages(
  const gateway::ReplayResult& r)
{
  std::map<std::uint64_t, std::vector<json>> out;
  std::optional<std::uint64_t> open;
  for (const auto& e : r.events)
  {
    if (e["kind"] == "TranscriptMsg")
    {
      open = e["seq"].get<std::uint64_t>();
      out[*open];
    }
    else if (e["kind"] == "Outcome")
    {
      open.reset();
    }
    else if (open)
    {
      out[*open].push_back(e);
    }
  }
  return out;
}

//==============================================================================
std::string criterion_1()
{
  const auto r = conversation();

  const auto goals = of_kind(r, "GoalMsg");
  check(goals.size() == 2, "expected 2 GoalMsgs, got "
    + std::to_string(goals.size()));
  check(goals[0]["payload"]["location_id"] == "lab"
    && goals[1]["payload"]["location_id"] == "office",
    "GoalMsgs are not lab then office");

  std::size_t ignored = 0;
  for (const auto& o : r.outcomes)
  {
    if (o.outcome && std::holds_alternative<speech::Ignored>(*o.outcome))
      ++ignored;
  }
  check(ignored == 1, "expected 1 ignored utterance, got "
    + std::to_string(ignored));

  const auto handled = handled_messages(r);
  check(handled.size() == 3, "expected 3 handled transcripts");
  check(handled.at(2).empty(), "ignored utterance published "
    + std::to_string(handled.at(2).size()) + " message(s)");

  std::vector<std::string> responses;
  for (const auto& [seq, records] : handled)
  {
    for (const auto& e : records)
    {
      if (e["kind"] == "SpeechOutMsg")
        responses.push_back(e["payload"]["text"]);
    }
  }
  check(responses == std::vector<std::string>{
      "Okay, navigating to the lab.", "Okay, navigating to the office."},
    "command responses differ");

  const auto office = nav::resolve_location(*fixtures::two_floor_site(),
      "office");
  check(r.final_state.floor_id == office.floor_id
    && r.final_state.cell == office.cell, "robot did not end at the office");

  return "2 goals (lab, office), 1 ignored with 0 messages, robot at office "
    + office.floor_id + " [" + std::to_string(office.cell.col) + ","
    + std::to_string(office.cell.row) + "]";
}

//==============================================================================
std::string criterion_2()
{
  const auto site = fixtures::two_floor_site();
  const auto lexicon = lab_office();
  const speech::WakeConfig wake("hey a1");
  const std::vector<std::string> vocabulary = {
    "hey", "a1", "hay", "a", "one", "take", "me", "to", "the", "lab",
    "office", "stop", "please", "go", "now", "home"};

  msgbus::Bus bus;
  bus.register_standard_topics();
  auto goals = bus.subscribe(msgbus::topics::Goal);
  auto stops = bus.subscribe(msgbus::topics::Stop);
  auto says = bus.subscribe(msgbus::topics::Say);

  std::mt19937 rng(20261018);
  std::uniform_int_distribution<std::size_t> len(0, 10);
  std::uniform_int_distribution<std::size_t> word(0, vocabulary.size() - 1);
  const auto random_tokens = [&]()
    {
      speech::TokenSeq t(len(rng));
      for (auto& w : t)
        w = vocabulary[word(rng)];
      return t;
    };

  int without = 0, with = 0;
  while (without < 1000 || with < 1000)
  {
    auto tokens = random_tokens();
    const bool want_wake = with < 1000 && (without >= 1000 || (rng() & 1));
    if (want_wake)
    {
      std::uniform_int_distribution<std::size_t> at(0, tokens.size());
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at(rng)),
        wake.phrase().begin(), wake.phrase().end());
    }
    const bool has_wake =
      speech::find_subsequence(tokens, wake.phrase()) != std::string::npos;
    if (!has_wake && without >= 1000)
      continue;

    const auto outcome = speech::handle_transcript(
      {speech::join(tokens)}, wake, lexicon, *site, bus);
    const auto g = goals.drain();
    const auto s = stops.drain();
    const auto y = says.drain();

    if (!has_wake)
    {
      ++without;
      check(std::holds_alternative<speech::Ignored>(outcome),
        "un-waked utterance was not ignored: " + speech::join(tokens));
      check(g.empty() && s.empty() && y.empty(),
        "un-waked utterance published messages: " + speech::join(tokens));
      continue;
    }

    ++with;
    const auto remainder = std::get<speech::GatePass>(
      speech::gate_wake_word(tokens, wake)).remainder;
    const auto expected = speech::parse_intent(remainder, lexicon);
    check(outcome == speech::HandleOutcome{speech::Commanded{expected}},
      "outcome differs from parse_intent for: " + speech::join(tokens));

    const bool is_goto = std::holds_alternative<speech::GoTo>(expected);
    const bool is_stop = std::holds_alternative<speech::Stop>(expected);
    check(g.size() == (is_goto ? 1u : 0u) && s.size() == (is_stop ? 1u : 0u)
      && y.size() == 1,
      "published messages do not match the intent for: "
      + speech::join(tokens));
    if (is_goto)
    {
      check(std::get<GoalMsg>(g[0].payload).location_id
        == std::get<speech::GoTo>(expected).location_id,
        "goal location differs for: " + speech::join(tokens));
    }
    check(std::get<SpeechOutMsg>(y[0].payload).text
      == speech::compose_response(expected, *site),
      "response differs for: " + speech::join(tokens));
  }

  return "1000 without wake phrase published nothing; "
         "1000 with it matched parse_intent";
}

//==============================================================================
std::string criterion_3()
{
  int reachable = 0, unreachable = 0;
  double worst = 0.0;
  for (std::uint32_t seed = 1; seed <= 100; ++seed)
  {
    const auto g = oracle::random_grid(50, 50, 0.3, seed);
    const auto floor = fixtures::to_floor(g);
    std::mt19937 rng(seed * 2654435761u);
    int sc, sr, gc, gr;
    check(oracle::random_free_cell(g, rng, sc, sr)
      && oracle::random_free_cell(g, rng, gc, gr),
      "grid " + std::to_string(seed) + " has no free cell");

    const auto expected = oracle::shortest(g, sc, sr, gc, gr);
    const auto plan = nav::plan_floor(floor, {sc, sr}, {gc, gr});
    check(plan.has_value() == expected.has_value(),
      "reachability differs on grid " + std::to_string(seed));
    if (!plan)
    {
      ++unreachable;
      continue;
    }
    ++reachable;
    const double delta = std::abs(plan->cost - expected->value());
    worst = std::max(worst, delta);
    check(delta <= CostTolerance, "cost differs on grid "
      + std::to_string(seed));
  }

  std::ostringstream out;
  out << reachable << " reachable, " << unreachable
      << " unreachable, max |dcost| " << std::setprecision(3) << worst;
  return out.str();
}

//==============================================================================
double segment_cost(const nav::FloorGrid& grid,
  const std::vector<nav::Cell>& waypoints)
{
  double sum = 0.0;
  for (std::size_t k = 1; k < waypoints.size(); ++k)
  {
    const auto step = nav::step_cost(grid, waypoints[k-1], waypoints[k]);
    check(step.has_value(), "segment contains an illegal step");
    sum += *step;
  }
  return sum;
}

std::string criterion_4()
{
  const auto site = fixtures::two_floor_site();
  check(site->elevator_cost() == ElevatorCost, "fixture elevator cost is not 5");
  const auto start = site->default_start();
  const auto goal = nav::resolve_location(*site, "office");
  const auto path = nav::plan_path(*site, {start.floor_id, start.cell}, goal);
  check(path.has_value(), "no cross-floor path");
  check(path->segments.size() == 2, "expected 2 segments");
  check(path->transitions.size() == 1, "expected 1 transition");
  check(!nav::validate_path(*site, *path), "path fails validation");

  const auto& t = path->transitions[0];
  const auto* shaft = [&]() -> const nav::ElevatorShaft*
    {
      for (const auto& s : site->shafts())
      {
        if (s.shaft_id == t.shaft_id)
          return &s;
      }
      return nullptr;
    }();
  check(shaft != nullptr, "transition names an unknown shaft");

  const auto& leg1 = path->segments[0];
  const auto& leg2 = path->segments[1];
  check(shaft->stop_on(leg1.floor_id)->cell == leg1.waypoints.back()
    && shaft->stop_on(leg2.floor_id)->cell == leg2.waypoints.front(),
    "segments are not joined at the shaft stops");

  const auto& f1 = *site->floor(leg1.floor_id);
  const auto& f2 = *site->floor(leg2.floor_id);
  const auto o1 = oracle::shortest(fixtures::to_oracle(f1),
      leg1.waypoints.front().col, leg1.waypoints.front().row,
      leg1.waypoints.back().col, leg1.waypoints.back().row);
  const auto o2 = oracle::shortest(fixtures::to_oracle(f2),
      leg2.waypoints.front().col, leg2.waypoints.front().row,
      leg2.waypoints.back().col, leg2.waypoints.back().row);
  check(o1 && o2, "oracle finds a leg unreachable");

  const double c1 = segment_cost(f1, leg1.waypoints);
  const double c2 = segment_cost(f2, leg2.waypoints);
  check(std::abs(c1 - o1->value()) <= CostTolerance, "leg 1 is not optimal");
  check(std::abs(c2 - o2->value()) <= CostTolerance, "leg 2 is not optimal");
  check(std::abs(path->total_cost - (o1->value() + ElevatorCost + o2->value()))
    <= CostTolerance, "total cost is not leg1 + 5 + leg2");

  const auto cut = site->without_shaft(shaft->shaft_id);
  check(!nav::plan_path(cut, {start.floor_id, start.cell}, goal),
    "removing the shaft did not make the office unreachable");

  std::ostringstream out;
  out << std::setprecision(10) << "total " << path->total_cost << " = "
      << o1->value() << " + 5 + " << o2->value()
      << "; unreachable without shaft";
  return out.str();
}

//==============================================================================
bool is_shaft_stop(const nav::SiteMap& site, const std::string& floor,
  nav::Cell cell)
{
  for (const auto& shaft : site.shafts())
  {
    if (const auto* stop = shaft.stop_on(floor); stop && stop->cell == cell)
      return true;
  }
  return false;
}

std::string criterion_5()
{
  const auto site = fixtures::two_floor_site();
  const auto lex = fixtures::lexicon();
  const std::vector<std::string> ids = {"lab", "office", "lobby"};
  std::size_t ticks_checked = 0, stops_seen = 0;

  for (std::uint32_t seed = 1; seed <= 100; ++seed)
  {
    const std::string where = " (interleaving " + std::to_string(seed) + ")";
    std::mt19937 rng(seed);
    msgbus::Bus bus;
    auto cfg = fixtures::sim_config(*site,
        std::uniform_int_distribution<int>(1, 3)(rng));
    sim::Session session(site, lex.wake, lex.lexicon, cfg, bus);

    std::uniform_int_distribution<int> op(0, 9);
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    std::optional<sim::RobotState> held;

    for (int step = 0; step < 200; ++step)
    {
      const int o = op(rng);
      if (o == 0)
      {
        const auto& id = ids[pick(rng)];
        bus.publish(msgbus::topics::Goal,
          GoalMsg{id, nav::resolve_location(*site, id)});
        held.reset();
        continue;
      }
      if (o == 1)
      {
        bus.publish(msgbus::topics::Stop, StopMsg{});
        ++stops_seen;
        session.process_pending();
        held = session.state();
        check(std::holds_alternative<sim::Stopped>(held->status),
          "robot not stopped after StopMsg" + where);
        continue;
      }

      session.process_pending();
      const auto before = session.state();
      session.tick();
      ++ticks_checked;
      const auto& after = session.state();

      check(site->is_free(after.floor_id, after.cell),
        "robot on an occupied or out-of-bounds cell" + where);
      if (held)
      {
        check(after.floor_id == held->floor_id && after.cell == held->cell,
          "robot moved after StopMsg" + where);
      }
      if (after.floor_id != before.floor_id)
      {
        const auto* nav = std::get_if<sim::Navigating>(&before.status);
        check(nav != nullptr, "floor changed while not navigating" + where);
        bool joined = false;
        for (const auto& t : nav->path.transitions)
        {
          const auto& a = nav->path.segments[t.from_index];
          const auto& b = nav->path.segments[t.to_index];
          joined = joined || (a.floor_id == before.floor_id
            && b.floor_id == after.floor_id
            && is_shaft_stop(*site, a.floor_id, a.waypoints.back())
            && is_shaft_stop(*site, b.floor_id, b.waypoints.front()));
        }
        check(joined, "floor changed away from a shaft stop" + where);
      }
      if (const auto* nav = std::get_if<sim::Navigating>(&after.status))
      {
        const auto cells = nav->path.flatten();
        const auto& at = cells[nav->next_waypoint_index - 1];
        check(at.floor_id == after.floor_id && at.cell == after.cell,
          "robot left its path" + where);
      }
    }
  }

  return std::to_string(stops_seen) + " stops, "
    + std::to_string(ticks_checked) + " ticks checked";
}

//==============================================================================
std::string criterion_6()
{
  const auto a = conversation();
  const auto b = conversation();
  check(!a.event_log.empty(), "event log is empty");
  check(a.event_log == b.event_log, "event logs differ");
  return std::to_string(a.events.size()) + " records, "
    + std::to_string(a.event_log.size()) + " bytes identical";
}

//==============================================================================
std::string criterion_7()
{
  const auto healthy = conversation();
  cloud::MockTtsClient broken;
  broken.set_unavailable(true);
  const auto degraded = conversation(&broken);

  check(degraded.clips_failed > 0 && degraded.clips_spoken == 0,
    "synthesizer failure was not exercised");
  check(of_kind(degraded, "GoalMsg") == of_kind(healthy, "GoalMsg"),
    "GoalMsg traffic changed");
  check(of_kind(degraded, "StateMsg") == of_kind(healthy, "StateMsg"),
    "robot state traffic changed");
  check(degraded.final_state == healthy.final_state, "final state changed");
  return std::to_string(degraded.clips_failed)
    + " synthesis failures, goals and states unchanged";
}

//==============================================================================
struct Criterion
{
  int number;
  const char* name;
  std::chrono::milliseconds limit;
  std::function<std::string()> run;
};

} // anonymous namespace

int main()
{
  spdlog::set_level(spdlog::level::off);

  const std::vector<Criterion> criteria = {
    {1, "scenario replay", Limit1, criterion_1},
    {2, "gate soundness", Limit2, criterion_2},
    {3, "planner oracle equivalence", Limit3, criterion_3},
    {4, "multi-floor correctness", NoLimit, criterion_4},
    {5, "stop dominance and safety", NoLimit, criterion_5},
    {6, "replay determinism", NoLimit, criterion_6},
    {7, "speech synthesis resilience", NoLimit, criterion_7},
  };

  int failures = 0;
  for (const auto& c : criteria)
  {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try
    {
      detail = c.run();
    }
    catch (const Violation& v)
    {
      ok = false;
      detail = v.what;
    }
    catch (const std::exception& e)
    {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

    std::string timing = std::to_string(elapsed.count()) + " ms";
    if (c.limit != NoLimit)
    {
      timing += " < " + std::to_string(c.limit.count()) + " ms";
      if (elapsed >= c.limit)
      {
        ok = false;
        detail += "; over time limit";
      }
    }

    std::cout << "criterion " << c.number << ": " << (ok ? "PASS" : "FAIL")
              << "  " << c.name << " [" << timing << "] " << detail << "\n";
    failures += ok ? 0 : 1;
  }

  std::cout << (failures == 0 ? "all criteria passed" :
    std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
