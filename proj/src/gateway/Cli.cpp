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

#include <guidebot/gateway/Cli.hpp>

#include <guidebot/Error.hpp>
#include <guidebot/cloud/Speaker.hpp>
#include <guidebot/gateway/Replay.hpp>
#include <guidebot/gateway/Service.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace guidebot {
namespace gateway {

namespace {

std::atomic<bool> g_shutdown{false};

extern "C" void on_signal(int)
{
  g_shutdown = true;
}

struct Inputs
{
  std::shared_ptr<const nav::SiteMap> site;
  speech::WakeConfig wake;
  std::optional<speech::Lexicon> lexicon;
};

// Throws SchemaError or ValidationError.
Inputs load_inputs(
  const std::string& map_path,
  const std::string& lexicon_path,
  const std::string& wake_override)
{
  Inputs in;
  in.site = std::make_shared<const nav::SiteMap>(
    nav::load_site_map_file(map_path));

  auto lexicon = speech::load_lexicon_file(lexicon_path);
  lexicon.lexicon.validate_against(*in.site);
  in.wake = wake_override.empty() ?
    lexicon.wake : speech::WakeConfig(wake_override);
  in.lexicon = std::move(lexicon.lexicon);
  return in;
}

sim::SimConfig sim_config(const nav::SiteMap& site, int tick_ms,
  int cells_per_tick)
{
  const auto start = site.default_start();
  sim::SimConfig cfg;
  cfg.tick = std::chrono::milliseconds(tick_ms);
  cfg.cells_per_tick = cells_per_tick;
  cfg.start = {start.floor_id, start.cell};
  cfg.start_heading = start.heading;
  return cfg;
}

} // anonymous namespace

//==============================================================================
int cli_run(const std::vector<std::string>& args, std::ostream& out,
  std::ostream& err)
{
  CLI::App app{"Voice-commanded guide robot simulator", "guidebot"};
  app.require_subcommand(1);

  std::string map_path;
  std::string lexicon_path;
  std::string wake;
  int tick_ms = 100;
  int cells_per_tick = 1;

  const auto common = [&](CLI::App* cmd)
    {
      cmd->add_option("--map", map_path, "Site map file (JSON)")->required();
      cmd->add_option("--lexicon", lexicon_path, "Lexicon file (JSON)")
      ->required();
    };

  const auto session_options = [&](CLI::App* cmd)
    {
      cmd->add_option("--wake", wake,
        "Wake phrase, overriding the lexicon file");
      cmd->add_option("--tick-ms", tick_ms, "Simulation tick in milliseconds")
      ->check(CLI::PositiveNumber);
      cmd->add_option("--cells-per-tick", cells_per_tick,
        "Cells the robot moves per tick")->check(CLI::PositiveNumber);
    };

  std::string listen;
  std::string audio_dir;
  std::string tts = "mock";
  std::string tts_credential_env = "GUIDEBOT_POLLY_CREDENTIALS";
  std::string aws_region = "us-east-1";
  auto* run = app.add_subcommand("run", "Start a live session");
  common(run);
  session_options(run);
  run->add_option("--listen", listen,
    "host:port to serve on (default $GUIDEBOT_LISTEN or 127.0.0.1:8765)");
  run->add_option("--audio-dir", audio_dir, "Directory for spoken clips");
  run->add_option("--tts", tts, "Speech synthesizer")
  ->check(CLI::IsMember({"mock", "polly"}));
  run->add_option("--tts-credential-env", tts_credential_env,
    "Variable holding <key id>:<secret>[:<token>] for Polly");
  run->add_option("--aws-region", aws_region, "Region for Polly");

  std::string script_path;
  std::string log_path;
  auto* replay = app.add_subcommand("replay",
      "Run a scripted session and print its event log");
  common(replay);
  session_options(replay);
  replay->add_option("--script", script_path, "Utterance script")->required();
  replay->add_option("--audio-dir", audio_dir, "Directory for spoken clips");
  replay->add_option("--log", log_path,
    "Write the event log here instead of stdout");

  auto* validate = app.add_subcommand("validate",
      "Check a map and lexicon and exit");
  common(validate);

  try
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitOk : ExitUsage;
  }

  Inputs inputs;
  try
  {
    inputs = load_inputs(map_path, lexicon_path, wake);
  }
  catch (const SchemaError& e)
  {
    err << "error: " << e.what() << "\n";
    return ExitValidation;
  }
  catch (const ValidationError& e)
  {
    err << "error: " << e.what() << "\n";
    return ExitValidation;
  }

  if (*validate)
  {
    out << "ok: " << inputs.site->floors().size() << " floor(s), "
        << inputs.site->locations().size() << " location(s), "
        << inputs.lexicon->entries().size() << " lexicon entr"
        << (inputs.lexicon->entries().size() == 1 ? "y" : "ies") << "\n";
    return ExitOk;
  }

  const auto sim = sim_config(*inputs.site, tick_ms, cells_per_tick);

  if (*replay)
  {
    std::vector<ScriptStep> script;
    try
    {
      script = load_script_file(script_path);
    }
    catch (const SchemaError& e)
    {
      err << "error: " << e.what() << "\n";
      return ExitValidation;
    }

    std::optional<cloud::DirectoryAudioSink> sink;
    if (!audio_dir.empty())
      sink.emplace(audio_dir);

    ReplayOptions options;
    options.sim = sim;
    options.sink = sink ? &*sink : nullptr;
    const auto result = run_replay(
      inputs.site, inputs.wake, *inputs.lexicon, script, options);

    const nlohmann::json final_record = {
      {"t", result.ticks},
      {"kind", "FinalState"},
      {"payload", to_json(result.final_state.to_msg())}
    };

    if (log_path.empty())
    {
      out << result.event_log << final_record.dump() << "\n";
    }
    else
    {
      std::ofstream log(log_path, std::ios::trunc);
      log << result.event_log;
      out << final_record.dump() << "\n";
    }

    std::size_t ignored = 0;
    for (const auto& o : result.outcomes)
    {
      if (o.outcome && std::holds_alternative<speech::Ignored>(*o.outcome))
        ++ignored;
    }
    err << "replayed " << result.outcomes.size() << " utterance(s), "
        << ignored << " ignored, " << result.ticks << " tick(s); robot at "
        << result.final_state.floor_id << " [" << result.final_state.cell.col
        << "," << result.final_state.cell.row << "] "
        << to_string(result.final_state.motion()) << "\n";
    return ExitOk;
  }

  // run
  ServiceOptions service;
  try
  {
    if (!listen.empty())
      service = parse_listen_address(listen);
    else if (const char* env = std::getenv("GUIDEBOT_LISTEN"); env && *env)
      service = parse_listen_address(env);
  }
  catch (const ValidationError& e)
  {
    err << "error: " << e.what() << "\n";
    return ExitUsage;
  }

  std::unique_ptr<cloud::TtsClient> client;
  if (tts == "polly")
  {
    cloud::SpeechClientConfig cfg;
    cfg.credential_ref = tts_credential_env;
    client = std::make_unique<cloud::PollyTtsClient>(cfg, aws_region);
  }

  LiveSession live(inputs.site, inputs.wake, *inputs.lexicon, sim, service,
    std::move(client),
    audio_dir.empty() ? std::nullopt : std::optional<std::string>(audio_dir));

  try
  {
    live.start();
  }
  catch (const Error& e)
  {
    err << "error: " << e.what() << "\n";
    return ExitValidation;
  }

  err << "guidebot listening on " << service.address << ":" << live.port()
      << " (Ctrl-C to stop)\n";

  g_shutdown = false;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_shutdown)
    std::this_thread::sleep_for(std::chrono::milliseconds(100));

  live.stop();
  err << "shut down\n";
  return ExitOk;
}

} // namespace gateway
} // namespace guidebot
