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

#include <guidebot/sim/Session.hpp>

#include <guidebot/Error.hpp>

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <thread>

namespace guidebot {
namespace sim {

namespace {

msgbus::Bus& with_standard_topics(msgbus::Bus& bus)
{
  bus.register_standard_topics();
  return bus;
}

} // anonymous namespace

//==============================================================================
Session::Session(
  std::shared_ptr<const nav::SiteMap> site,
  speech::WakeConfig wake,
  speech::Lexicon lexicon,
  SimConfig config,
  msgbus::Bus& bus)
: _site(std::move(site)),
  _wake(std::move(wake)),
  _lexicon(std::move(lexicon)),
  _config(std::move(config)),
  _bus(with_standard_topics(bus)),
  _transcripts(bus.subscribe(msgbus::topics::Transcript)),
  _goals(bus.subscribe(msgbus::topics::Goal)),
  _stops(bus.subscribe(msgbus::topics::Stop))
{
  _config.validate(*_site);
  _lexicon.validate_against(*_site);
  _state = initial_state(_config);
}

//==============================================================================
void Session::set_outcome_listener(OutcomeListener listener)
{
  _listener = std::move(listener);
}

//==============================================================================
void Session::apply_nav_commands()
{
  auto commands = _goals.drain();
  auto stops = _stops.drain();
  commands.insert(commands.end(),
    std::make_move_iterator(stops.begin()),
    std::make_move_iterator(stops.end()));
  std::sort(commands.begin(), commands.end(),
    [](const msgbus::Envelope& a, const msgbus::Envelope& b)
    {
      return a.stamp < b.stamp;
    });

  for (const auto& envelope : commands)
  {
    try
    {
      if (const auto* goal = std::get_if<GoalMsg>(&envelope.payload))
        _state = on_goal(std::move(_state), *goal, *_site, _bus);
      else if (std::holds_alternative<StopMsg>(envelope.payload))
        _state = on_stop(std::move(_state));
    }
    catch (const std::exception& e)
    {
      spdlog::error("navigation command #{} on [{}] failed: {}",
        envelope.seq, envelope.topic.str(), e.what());
    }
  }
}

//==============================================================================
void Session::process_pending()
{
  apply_nav_commands();

  while (const auto envelope = _transcripts.try_pop())
  {
    const auto* msg = std::get_if<TranscriptMsg>(&envelope->payload);
    if (!msg)
      continue;

    OutcomeRecord record;
    record.transcript_seq = envelope->seq;
    record.tick = _ticks;
    record.text = msg->text;

    try
    {
      record.outcome = speech::handle_transcript(
        {msg->text, msg->timestamp_ms, msg->confidence},
        _wake, _lexicon, *_site, _bus);
    }
    catch (const std::exception& e)
    {
      record.error = e.what();
      spdlog::error("transcript #{} failed: {}", envelope->seq, e.what());
    }

    apply_nav_commands();

    if (_listener)
      _listener(record);
  }
}

//==============================================================================
void Session::tick()
{
  process_pending();
  _state = sim::tick(std::move(_state), _config, *_site, _bus);
  ++_ticks;
}

//==============================================================================
void Session::run(std::stop_token stop)
{
  auto next = std::chrono::steady_clock::now();
  while (!stop.stop_requested())
  {
    try
    {
      tick();
    }
    catch (const std::exception& e)
    {
      spdlog::error("session tick failed: {}", e.what());
    }

    next += _config.tick;
    std::this_thread::sleep_until(next);
  }
}

} // namespace sim
} // namespace guidebot
