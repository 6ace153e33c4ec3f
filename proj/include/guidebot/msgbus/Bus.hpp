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

#ifndef GUIDEBOT__MSGBUS__BUS_HPP
#define GUIDEBOT__MSGBUS__BUS_HPP

#include <guidebot/msgbus/Messages.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guidebot {
namespace msgbus {

//==============================================================================
/// Dot-separated topic name such as "nav.goal". Each segment is a non-empty
/// run of lowercase ASCII letters and digits.
class TopicName
{
public:

  /// Throws InvalidTopicName.
  explicit TopicName(std::string name);

  /// Same as the constructor, without throwing.
  static std::optional<TopicName> parse(std::string_view name);

  static bool is_valid(std::string_view name);

  const std::string& str() const { return _name; }

  friend bool operator==(const TopicName&, const TopicName&) = default;
  friend auto operator<=>(const TopicName&, const TopicName&) = default;

private:
  std::string _name;
};

namespace topics {
inline const TopicName Transcript{"speech.transcript"};
inline const TopicName Goal{"nav.goal"};
inline const TopicName Stop{"nav.stop"};
inline const TopicName Say{"speech.say"};
inline const TopicName State{"robot.state"};
} // namespace topics

//==============================================================================
struct Envelope
{
  TopicName topic;
  /// Per-topic sequence number, starting at 1 with no gaps.
  std::uint64_t seq = 0;
  /// Bus-wide publish order. Lets a consumer of several topics merge them
  /// back into the order they were published in.
  std::uint64_t stamp = 0;
  Payload payload;
};

class Bus;

//==============================================================================
/// Receives every envelope published on one topic after the subscription was
/// created, in publish order. Dropping the subscription detaches it.
class Subscription
{
public:

  const TopicName& topic() const;

  /// Next undelivered envelope, if any.
  std::optional<Envelope> try_pop();

  /// Blocks until an envelope is available or the timeout expires.
  std::optional<Envelope> pop_for(std::chrono::milliseconds timeout);

  /// All undelivered envelopes, oldest first.
  std::vector<Envelope> drain();

  std::size_t pending() const;

  class Queue;

private:
  friend class Bus;
  Subscription(std::shared_ptr<Queue> queue);
  std::shared_ptr<Queue> _queue;
};

//==============================================================================
/// In-process topic-based publish/subscribe bus.
///
/// Delivery is fire-and-forget broadcast: every subscription that exists when
/// a message is published receives it exactly once, nothing is replayed for
/// later subscribers, and ordering is guaranteed per topic only. All member
/// functions are safe to call from multiple threads.
class Bus
{
public:

  /// Subscriber queues larger than this trigger a warning. Messages are never
  /// dropped.
  static constexpr std::size_t HighWaterMark = 10000;

  Bus() = default;
  Bus(const Bus&) = delete;
  Bus& operator=(const Bus&) = delete;

  /// Re-registering with the same kind is a no-op. Throws
  /// ConflictingRegistration when the topic exists with another kind.
  void register_topic(const TopicName& topic, PayloadKind kind);

  /// Registers the five standard pipeline topics.
  void register_standard_topics();

  bool is_registered(const TopicName& topic) const;

  /// Returns the sequence number assigned to the message. Throws UnknownTopic
  /// or PayloadKindMismatch.
  std::uint64_t publish(const TopicName& topic, Payload payload);

  /// Throws UnknownTopic.
  Subscription subscribe(const TopicName& topic);

  /// Number of live subscriptions on a topic.
  std::size_t subscriber_count(const TopicName& topic) const;

private:
  struct TopicState
  {
    PayloadKind kind;
    std::uint64_t next_seq = 1;
    std::vector<std::weak_ptr<Subscription::Queue>> subscribers;
  };

  mutable std::mutex _mutex;
  std::map<TopicName, TopicState> _topics;
  std::uint64_t _next_stamp = 1;
};

} // namespace msgbus
} // namespace guidebot

#endif // GUIDEBOT__MSGBUS__BUS_HPP
