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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/Fixtures.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <guidebot/Error.hpp>
#include <guidebot/gateway/Cli.hpp>
#include <guidebot/gateway/Replay.hpp>
#include <guidebot/gateway/Service.hpp>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <filesystem>
#include <sstream>

using namespace guidebot;
using namespace guidebot::gateway;
using nlohmann::json;

namespace {

const std::vector<ScriptStep> LabThenOffice = {
  Utterance{"Hey A1, take me to the lab."},
  Utterance{"Take me to the office."},
  Utterance{"Hey A1, take me to the office."}
};

ReplayResult replay(const std::vector<ScriptStep>& script,
  int cells_per_tick = 1)
{
  const auto site = fixtures::two_floor_site();
  const auto lex = fixtures::lexicon();
  ReplayOptions options;
  options.sim = fixtures::sim_config(*site, cells_per_tick);
  return run_replay(site, lex.wake, lex.lexicon, script, options);
}

struct CliResult
{
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args)
{
  std::ostringstream out, err;
  const int code = cli_run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content)
{
  const auto path = std::filesystem::temp_directory_path()
    / ("guidebot-" + std::to_string(::getpid()) + "-" + name);
  std::ofstream(path) << content;
  return path.string();
}

/// Blocking WebSocket client for the /stream endpoint.
class StreamClient
{
public:
  explicit StreamClient(unsigned short port)
  : _ws(_ioc)
  {
    namespace net = boost::asio;
    net::ip::tcp::resolver resolver(_ioc);
    net::connect(_ws.next_layer(),
      resolver.resolve("127.0.0.1", std::to_string(port)));
    _ws.handshake("127.0.0.1:" + std::to_string(port), "/stream");
  }

  void send(const std::string& text)
  {
    _ws.write(boost::asio::buffer(text));
  }

  json read()
  {
    boost::beast::flat_buffer buffer;
    _ws.read(buffer);
    return json::parse(boost::beast::buffers_to_string(buffer.data()));
  }

  /// Reads until pred holds, returning every message read on the way.
  std::vector<json> read_until(const std::function<bool(const json&)>& pred,
    std::size_t limit = 2000)
  {
    std::vector<json> seen;
    while (seen.size() < limit)
    {
      seen.push_back(read());
      if (pred(seen.back()))
        return seen;
    }
    FAIL("condition not met after ", limit, " messages");
    return seen;
  }

  void close()
  {
    _ws.close(boost::beast::websocket::close_code::normal);
  }

private:
  boost::asio::io_context _ioc;
  boost::beast::websocket::stream<boost::asio::ip::tcp::socket> _ws;
};

} // anonymous namespace

//==============================================================================
TEST_CASE("parse_script")
{
  const auto steps = parse_script(
    "# comment\n"
    "Hey A1, take me to the lab.\n"
    "\n"
    "   \n"
    "#tick 3\n"
    "  Take me to the office.  \r\n"
    "#tick\t12");
  REQUIRE(steps.size() == 4);
  CHECK(steps[0] == ScriptStep{Utterance{"Hey A1, take me to the lab."}});
  CHECK(steps[1] == ScriptStep{AdvanceTicks{3}});
  CHECK(steps[2] == ScriptStep{Utterance{"Take me to the office."}});
  CHECK(steps[3] == ScriptStep{AdvanceTicks{12}});

  CHECK(parse_script("").empty());
  CHECK(parse_script("#ticker\n").empty());
  CHECK_THROWS_AS(parse_script("#tick\n"), SchemaError);
  CHECK_THROWS_AS(parse_script("#tick x\n"), SchemaError);
  CHECK_THROWS_AS(parse_script("#tick -1\n"), SchemaError);
  CHECK_THROWS_AS(load_script_file("/nonexistent/script"), SchemaError);
}

TEST_CASE("fixture script files parse")
{
  const auto a = load_script_file(fixtures::data_path("lab_then_office.script"));
  CHECK(a == LabThenOffice);
  const auto b = load_script_file(fixtures::data_path("walk_and_stop.script"));
  CHECK(b.size() == 7);
}

//==============================================================================
TEST_CASE("replay of the lab then office conversation")
{
  const auto result = replay(LabThenOffice);

  const auto goals = [&]()
    {
      std::vector<std::string> ids;
      for (const auto& r : result.events)
      {
        if (r["kind"] == "GoalMsg")
          ids.push_back(r["payload"]["location_id"]);
      }
      return ids;
    }();
  CHECK(goals == std::vector<std::string>{"lab", "office"});

  REQUIRE(result.outcomes.size() == 3);
  CHECK(std::holds_alternative<speech::Commanded>(*result.outcomes[0].outcome));
  CHECK(std::holds_alternative<speech::Ignored>(*result.outcomes[1].outcome));
  CHECK(std::holds_alternative<speech::Commanded>(*result.outcomes[2].outcome));

  std::vector<std::string> says;
  for (const auto& r : result.events)
  {
    if (r["kind"] == "SpeechOutMsg")
      says.push_back(r["payload"]["text"]);
  }
  CHECK(says == std::vector<std::string>{
      "Okay, navigating to the lab.",
      "Okay, navigating to the office.",
      "You have arrived at the office."});

  CHECK(result.final_state.floor_id == "2");
  CHECK(result.final_state.cell == nav::Cell{3, 5});
  CHECK(result.final_state.motion() == MotionStatus::Idle);
  CHECK(result.clips_spoken == 3);
}

TEST_CASE("event log records carry time, kind and topic")
{
  const auto result = replay(LabThenOffice);
  REQUIRE_FALSE(result.events.empty());
  std::uint64_t last_t = 0;
  for (const auto& r : result.events)
  {
    CHECK(r.contains("t"));
    CHECK(r.contains("kind"));
    CHECK(r.contains("payload"));
    CHECK(r["t"].get<std::uint64_t>() >= last_t);
    last_t = r["t"];
    if (r["kind"] != "Outcome")
    {
      CHECK(r.contains("topic"));
      CHECK(r.contains("seq"));
    }
  }
  CHECK(result.events.front()["kind"] == "TranscriptMsg");
  CHECK(result.events.front()["t"] == 0);

  std::size_t lines = 0;
  for (const char c : result.event_log)
    lines += c == '\n';
  CHECK(lines == result.events.size());
}

TEST_CASE("replay is deterministic")
{
  const auto a = replay(LabThenOffice);
  const auto b = replay(LabThenOffice);
  CHECK(a.event_log == b.event_log);
  const auto script = load_script_file(
    fixtures::data_path("walk_and_stop.script"));
  CHECK(replay(script, 2).event_log == replay(script, 2).event_log);
}

TEST_CASE("empty script leaves the robot at the start")
{
  const auto result = replay({});
  CHECK(result.ticks == 1);
  CHECK(result.final_state.cell == nav::Cell{2, 2});
  CHECK(result.outcomes.empty());
}

TEST_CASE("stop holds the robot until the next command")
{
  const auto script = load_script_file(
    fixtures::data_path("walk_and_stop.script"));
  const auto result = replay(script);

  std::optional<json> held;
  bool saw_stop = false;
  for (const auto& r : result.events)
  {
    if (r["kind"] == "StopMsg")
      saw_stop = true;
    if (saw_stop && r["kind"] == "GoalMsg")
      break;
    if (saw_stop && r["kind"] == "StateMsg")
    {
      CHECK(r["payload"]["status"] == "stopped");
      if (held)
        CHECK(r["payload"] == *held);
      held = r["payload"];
    }
  }
  CHECK(saw_stop);
  REQUIRE(held);
  CHECK(result.final_state.cell == nav::Cell{3, 5});
}

TEST_CASE("replay with speech synthesis failures still navigates")
{
  const auto site = fixtures::two_floor_site();
  const auto lex = fixtures::lexicon();
  cloud::MockTtsClient tts;
  tts.set_unavailable(true);
  ReplayOptions options;
  options.sim = fixtures::sim_config(*site);
  options.tts = &tts;
  const auto broken = run_replay(site, lex.wake, lex.lexicon, LabThenOffice,
      options);
  const auto healthy = replay(LabThenOffice);
  CHECK(broken.event_log == healthy.event_log);
  CHECK(broken.clips_spoken == 0);
  CHECK(broken.clips_failed == 3);
}

//==============================================================================
TEST_CASE("cli validate")
{
  const auto map = fixtures::data_path("two_floor_site.json");
  const auto lex = fixtures::data_path("lexicon.json");

  auto r = cli({"validate", "--map", map, "--lexicon", lex});
  CHECK(r.code == ExitOk);
  CHECK(r.out.find("2 floor(s)") != std::string::npos);

  SUBCASE("map without shafts is valid")
  {
    auto doc = fixtures::site_json();
    doc.erase("shafts");
    const auto path = temp_file("noshaft.json", doc.dump());
    CHECK(cli({"validate", "--map", path, "--lexicon", lex}).code == ExitOk);
  }

  SUBCASE("malformed map")
  {
    const auto path = temp_file("broken.json", "{\"floors\": [");
    r = cli({"validate", "--map", path, "--lexicon", lex});
    CHECK(r.code == ExitValidation);
    CHECK(r.err.find("error:") != std::string::npos);
  }

  SUBCASE("invalid map")
  {
    auto doc = fixtures::site_json();
    doc["locations"][0]["cell"] = {0, 0};
    const auto path = temp_file("invalid.json", doc.dump());
    r = cli({"validate", "--map", path, "--lexicon", lex});
    CHECK(r.code == ExitValidation);
    CHECK(r.err.find("location [lab]") != std::string::npos);
  }

  SUBCASE("lexicon naming a missing location")
  {
    const auto path = temp_file("lex.json",
        R"({"wake": "hey a1", "entries": [{"location_id": "kitchen", "keywords": ["kitchen"]}]})");
    CHECK(cli({"validate", "--map", map, "--lexicon", path}).code
      == ExitValidation);
  }

  SUBCASE("missing file")
  {
    CHECK(cli({"validate", "--map", "/nonexistent.json", "--lexicon", lex}).code
      == ExitValidation);
  }
}

TEST_CASE("cli usage errors")
{
  CHECK(cli({}).code == ExitUsage);
  CHECK(cli({"bogus"}).code == ExitUsage);
  CHECK(cli({"validate", "--map", "x"}).code == ExitUsage);
  CHECK(cli({"replay", "--map", "x", "--lexicon", "y"}).code == ExitUsage);
  CHECK(cli({"run", "--map", "x", "--lexicon", "y", "--tick-ms", "0"}).code
    == ExitUsage);
  CHECK(cli({"--help"}).code == ExitOk);
}

TEST_CASE("cli replay prints the event log and a final state")
{
  const auto r = cli({"replay",
      "--map", fixtures::data_path("two_floor_site.json"),
      "--lexicon", fixtures::data_path("lexicon.json"),
      "--script", fixtures::data_path("lab_then_office.script")});
  REQUIRE(r.code == ExitOk);

  std::istringstream lines(r.out);
  std::string line, last;
  std::size_t count = 0;
  while (std::getline(lines, line))
  {
    CHECK(json::accept(line));
    last = line;
    ++count;
  }
  CHECK(count > 3);
  const auto final_record = json::parse(last);
  CHECK(final_record["kind"] == "FinalState");
  CHECK(final_record["payload"]["floor_id"] == "2");
  CHECK(final_record["payload"]["cell"] == json::array({3, 5}));
  CHECK(r.err.find("1 ignored") != std::string::npos);
}

TEST_CASE("cli replay rejects a malformed script")
{
  const auto path = temp_file("bad.script", "#tick many\n");
  CHECK(cli({"replay",
      "--map", fixtures::data_path("two_floor_site.json"),
      "--lexicon", fixtures::data_path("lexicon.json"),
      "--script", path}).code == ExitValidation);
}

//==============================================================================
TEST_CASE("inject_utterance")
{
  msgbus::Bus bus;
  bus.register_standard_topics();
  auto sub = bus.subscribe(msgbus::topics::Transcript);

  const auto ok = inject_utterance(bus, R"({"text": "hey a1 stop"})", 42);
  REQUIRE(std::holds_alternative<InjectAccepted>(ok));
  CHECK(std::get<InjectAccepted>(ok).transcript_seq == 1);
  const auto typed = inject_utterance(bus,
      R"({"type": "utterance", "text": ""})", 0);
  CHECK(std::holds_alternative<InjectAccepted>(typed));

  for (const auto* bad : {"not json", "[1]", R"({"text": 3})", "{}",
                          R"({"type": "reset", "text": "x"})"})
  {
    CAPTURE(bad);
    CHECK(std::holds_alternative<InjectRejected>(
      inject_utterance(bus, bad, 0)));
  }

  const auto got = sub.drain();
  REQUIRE(got.size() == 2);
  const auto& msg = std::get<TranscriptMsg>(got[0].payload);
  CHECK(msg.text == "hey a1 stop");
  CHECK(msg.timestamp_ms == 42);
}

TEST_CASE("parse_listen_address")
{
  const auto a = parse_listen_address("0.0.0.0:9000");
  CHECK(a.address == "0.0.0.0");
  CHECK(a.port == 9000);
  CHECK_THROWS_AS(parse_listen_address("9000"), ValidationError);
  CHECK_THROWS_AS(parse_listen_address("host:"), ValidationError);
  CHECK_THROWS_AS(parse_listen_address("host:99999"), ValidationError);
  CHECK_THROWS_AS(parse_listen_address("host:8x"), ValidationError);
}

TEST_CASE("outcome board")
{
  OutcomeBoard board;
  sim::OutcomeRecord first{1, 0, "a", speech::HandleOutcome{speech::Ignored{}},
    {}};
  board.post(first);

  std::optional<std::uint64_t> seen;
  board.when_ready(1, [&](const sim::OutcomeRecord& r) { seen = r.transcript_seq; });
  CHECK(seen == 1u);

  seen.reset();
  board.when_ready(2, [&](const sim::OutcomeRecord& r) { seen = r.transcript_seq; });
  CHECK_FALSE(seen);
  board.post({2, 0, "b", {}, "boom"});
  CHECK(seen == 2u);

  CHECK_FALSE(board.wait(3, std::chrono::milliseconds(10)));
  std::jthread poster([&board]()
    {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      board.post({3, 0, "c", {}, {}});
    });
  const auto got = board.wait(3, std::chrono::seconds(5));
  REQUIRE(got);
  CHECK(got->text == "c");
}

//==============================================================================
TEST_CASE("live session over HTTP and WebSocket")
{
  const auto site = fixtures::two_floor_site();
  const auto lex = fixtures::lexicon();
  auto sim = fixtures::sim_config(*site);
  sim.tick = std::chrono::milliseconds(20);
  ServiceOptions options;
  options.port = 0;

  LiveSession live(site, lex.wake, lex.lexicon, sim, options);
  live.start();
  REQUIRE(live.port() != 0);

  httplib::Client http("127.0.0.1", live.port());
  http.set_read_timeout(5, 0);

  SUBCASE("map and state")
  {
    const auto map = http.Get("/map");
    REQUIRE(map);
    CHECK(map->status == 200);
    CHECK(json::parse(map->body) == nav::to_json(*site));

    // The first tick may not have happened yet.
    httplib::Result state;
    for (int i = 0; i < 250; ++i)
    {
      state = http.Get("/state");
      if (state && state->status == 200)
        break;
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    REQUIRE(state);
    CHECK(state->status == 200);
    const auto snapshot = json::parse(state->body);
    CHECK(snapshot["type"] == "StateMsg");
    CHECK(snapshot["payload"]["cell"] == json::array({2, 2}));

    const auto missing = http.Get("/nowhere");
    REQUIRE(missing);
    CHECK(missing->status == 404);
  }

  SUBCASE("utterance over HTTP")
  {
    auto res = http.Post("/utterance", R"({"text": "Hey A1, take me to the lab."})",
        "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    auto reply = json::parse(res->body);
    CHECK(reply["type"] == "outcome");
    CHECK(reply["result"] == "commanded");
    CHECK(reply["intent"] == json{{"type", "goto"}, {"location_id", "lab"}});

    res = http.Post("/utterance", R"({"text": "take me to the lab"})",
        "application/json");
    REQUIRE(res);
    CHECK(json::parse(res->body)["result"] == "ignored");

    res = http.Post("/utterance", "{", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(json::parse(res->body)["type"] == "error");
  }

  SUBCASE("stream pushes state and answers injections")
  {
    StreamClient ws(live.port());
    const auto first = ws.read_until([](const json& m)
        {
          return m["type"] == "StateMsg";
        });
    CHECK(first.back()["payload"]["floor_id"] == "1");

    ws.send(R"({"text": "Hey A1, take me to the lab."})");
    bool outcome = false, said = false, arrived = false;
    ws.read_until([&](const json& m)
      {
        if (m["type"] == "outcome")
        {
          CHECK(m["result"] == "commanded");
          outcome = true;
        }
        if (m["type"] == "SpeechOutMsg")
        {
          if (m["payload"]["text"] == "Okay, navigating to the lab.")
            said = true;
          if (m["payload"]["text"] == "You have arrived at the lab.")
            arrived = true;
        }
        return outcome && said && arrived;
      });

    ws.send("not json");
    ws.read_until([](const json& m) { return m["type"] == "error"; });

    ws.send(R"({"text": "take me to the office"})");
    ws.read_until([](const json& m)
      {
        return m["type"] == "outcome" && m["result"] == "ignored";
      });
    ws.close();
  }

  live.stop();
  live.stop();
}
