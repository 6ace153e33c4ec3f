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

#include <guidebot/gateway/EventLog.hpp>

#include <algorithm>

namespace guidebot {
namespace gateway {

using nlohmann::json;

//==============================================================================
json to_json(const speech::Intent& intent)
{
  if (const auto* go = std::get_if<speech::GoTo>(&intent))
    return {{"type", "goto"}, {"location_id", go->location_id}};

  if (std::holds_alternative<speech::Stop>(intent))
    return {{"type", "stop"}};

  const auto& unknown = std::get<speech::Unknown>(intent);
  return {{"type", "unknown"}, {"remainder", unknown.remainder}};
}

//==============================================================================
json to_json(const sim::OutcomeRecord& record)
{
  json j = {
    {"transcript_seq", record.transcript_seq},
    {"text", record.text}
  };

  if (!record.outcome)
  {
    j["result"] = "error";
    j["error"] = record.error;
    return j;
  }

  if (const auto* cmd = std::get_if<speech::Commanded>(&*record.outcome))
  {
    j["result"] = "commanded";
    j["intent"] = to_json(cmd->intent);
  }
  else
  {
    j["result"] = "ignored";
  }
  return j;
}

//==============================================================================
EventLog::EventLog(msgbus::Bus& bus)
{
  for (const auto* topic : {
      &msgbus::topics::Transcript,
      &msgbus::topics::Goal,
      &msgbus::topics::Stop,
      &msgbus::topics::Say,
      &msgbus::topics::State})
  {
    _subscriptions.push_back(bus.subscribe(*topic));
  }
}

//==============================================================================
void EventLog::collect(std::uint64_t t)
{
  std::vector<msgbus::Envelope> pending;
  for (auto& sub : _subscriptions)
  {
    auto batch = sub.drain();
    pending.insert(pending.end(),
      std::make_move_iterator(batch.begin()),
      std::make_move_iterator(batch.end()));
  }

  std::sort(pending.begin(), pending.end(),
    [](const msgbus::Envelope& a, const msgbus::Envelope& b)
    {
      return a.stamp < b.stamp;
    });

  for (const auto& e : pending)
  {
    _records.push_back({
        {"t", t},
        {"kind", to_string(kind_of(e.payload))},
        {"topic", e.topic.str()},
        {"seq", e.seq},
        {"payload", guidebot::to_json(e.payload)}
      });
  }
}

//==============================================================================
void EventLog::note_outcome(const sim::OutcomeRecord& record)
{
  collect(record.tick);
  _records.push_back({
      {"t", record.tick},
      {"kind", "Outcome"},
      {"payload", to_json(record)}
    });
}

//==============================================================================
std::vector<json> EventLog::of_kind(const std::string& kind) const
{
  std::vector<json> out;
  for (const auto& r : _records)
  {
    if (r.at("kind") == kind)
      out.push_back(r);
  }
  return out;
}

//==============================================================================
std::string EventLog::to_ndjson() const
{
  std::string out;
  for (const auto& r : _records)
  {
    out += r.dump();
    out.push_back('\n');
  }
  return out;
}

} // namespace gateway
} // namespace guidebot
