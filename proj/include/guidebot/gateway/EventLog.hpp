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

#ifndef GUIDEBOT__GATEWAY__EVENTLOG_HPP
#define GUIDEBOT__GATEWAY__EVENTLOG_HPP

#include <guidebot/msgbus/Bus.hpp>
#include <guidebot/sim/Session.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace guidebot {
namespace gateway {

/// {"type": "goto", "location_id": ...} | {"type": "stop"} |
/// {"type": "unknown", "remainder": [...]}
nlohmann::json to_json(const speech::Intent& intent);

/// Outcome reply shared by the event log and the live service:
/// {"transcript_seq", "text", "result": "ignored"|"commanded"|"error",
///  "intent"?, "error"?}
nlohmann::json to_json(const sim::OutcomeRecord& record);

//==============================================================================
/// Ordered record of everything published on the standard topics, plus one
/// "Outcome" record per handled transcript.
///
/// Each record is {"t", "kind", "topic", "seq", "payload"} where t is the
/// session's logical time (tick count). Outcome records carry no topic or seq.
class EventLog
{
public:

  /// Subscribes to the five standard topics, which must be registered.
  explicit EventLog(msgbus::Bus& bus);

  /// Appends every envelope published since the last call, in publish order.
  void collect(std::uint64_t t);

  /// Collects first, then appends the outcome record.
  void note_outcome(const sim::OutcomeRecord& record);

  const std::vector<nlohmann::json>& records() const { return _records; }

  /// Records with the given kind, e.g. "GoalMsg".
  std::vector<nlohmann::json> of_kind(const std::string& kind) const;

  /// One compact JSON object per line, each line ending in '\n'.
  std::string to_ndjson() const;

private:
  std::vector<msgbus::Subscription> _subscriptions;
  std::vector<nlohmann::json> _records;
};

} // namespace gateway
} // namespace guidebot

#endif // GUIDEBOT__GATEWAY__EVENTLOG_HPP
