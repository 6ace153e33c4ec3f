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

#include <guidebot/gateway/Replay.hpp>

#include <guidebot/Error.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace guidebot {
namespace gateway {

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'
    || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

} // anonymous namespace

//==============================================================================
std::vector<ScriptStep> parse_script(std::string_view text)
{
  std::vector<ScriptStep> steps;
  std::size_t line_no = 0;
  while (!text.empty())
  {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ?
      std::string_view{} : text.substr(eol + 1);

    line = trim(line);
    if (line.empty())
      continue;

    if (line.rfind("#tick", 0) == 0
      && (line.size() == 5 || line[5] == ' ' || line[5] == '\t'))
    {
      const auto arg = trim(line.substr(5));
      std::uint64_t n = 0;
      const auto [ptr, ec] =
        std::from_chars(arg.data(), arg.data() + arg.size(), n);
      if (arg.empty() || ec != std::errc() || ptr != arg.data() + arg.size())
      {
        throw SchemaError(
          "script line " + std::to_string(line_no)
          + ": expected '#tick <count>'");
      }
      steps.push_back(AdvanceTicks{n});
      continue;
    }

    if (line.front() == '#')
      continue;

    steps.push_back(Utterance{std::string(line)});
  }
  return steps;
}

//==============================================================================
std::vector<ScriptStep> load_script_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw SchemaError("cannot open script file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_script(ss.str());
}

//==============================================================================
ReplayResult run_replay(
  std::shared_ptr<const nav::SiteMap> site,
  const speech::WakeConfig& wake,
  const speech::Lexicon& lexicon,
  const std::vector<ScriptStep>& script,
  const ReplayOptions& options)
{
  msgbus::Bus bus;
  sim::Session session(site, wake, lexicon, options.sim, bus);
  EventLog log(bus);

  cloud::MockTtsClient default_tts;
  cloud::DiscardAudioSink default_sink;
  const auto tick_ms = options.sim.tick.count();
  cloud::SpeakerService speaker(
    bus,
    options.tts ? *options.tts : default_tts,
    options.sink ? *options.sink : default_sink,
    [&session, tick_ms]()
    {
      return static_cast<std::int64_t>(session.tick_count()) * tick_ms;
    });

  ReplayResult result;
  session.set_outcome_listener(
    [&](const sim::OutcomeRecord& record)
    {
      log.note_outcome(record);
      result.outcomes.push_back(record);
    });

  const auto advance = [&]()
    {
      session.tick();
      log.collect(session.tick_count());
      speaker.drain();
    };

  for (const auto& step : script)
  {
    if (const auto* u = std::get_if<Utterance>(&step))
    {
      const auto now = static_cast<std::int64_t>(session.tick_count())
        * tick_ms;
      bus.publish(msgbus::topics::Transcript, TranscriptMsg{u->text, now, {}});
      session.process_pending();
      log.collect(session.tick_count());
      speaker.drain();
    }
    else
    {
      for (std::uint64_t i = 0; i < std::get<AdvanceTicks>(step).ticks; ++i)
        advance();
    }
  }

  std::uint64_t settle = 0;
  do
  {
    advance();
    ++settle;
  } while (session.state().motion() == MotionStatus::Navigating
  && settle < options.settle_limit);

  result.final_state = session.state();
  result.ticks = session.tick_count();
  result.events = log.records();
  result.event_log = log.to_ndjson();
  result.clips_spoken = speaker.spoken();
  result.clips_failed = speaker.failed();
  return result;
}

} // namespace gateway
} // namespace guidebot
