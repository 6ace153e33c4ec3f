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

#include <guidebot/msgbus/Bus.hpp>

#include <guidebot/Error.hpp>

#include <spdlog/spdlog.h>

namespace guidebot {
namespace msgbus {

//==============================================================================
TopicName::TopicName(std::string name)
: _name(std::move(name))
{
  if (!is_valid(_name))
    throw InvalidTopicName("invalid topic name [" + _name + "]");
}

//==============================================================================
std::optional<TopicName> TopicName::parse(std::string_view name)
{
  if (!is_valid(name))
    return std::nullopt;
  return TopicName(std::string(name));
}

//==============================================================================
bool TopicName::is_valid(std::string_view name)
{
  if (name.empty())
    return false;

  bool segment_empty = true;
  for (const char c : name)
  {
    if (c == '.')
    {
      if (segment_empty)
        return false;
      segment_empty = true;
      continue;
    }

    const bool lower = c >= 'a' && c <= 'z';
    const bool digit = c >= '0' && c <= '9';
    if (!lower && !digit)
      return false;
    segment_empty = false;
  }

  return !segment_empty;
}

//==============================================================================
class Subscription::Queue
{
public:
  explicit Queue(TopicName topic_)
  : topic(std::move(topic_))
  {
    // Do nothing
  }

  TopicName topic;
  mutable std::mutex mutex;
  std::condition_variable cv;
  std::deque<Envelope> envelopes;
  bool warned = false;
};

//==============================================================================
Subscription::Subscription(std::shared_ptr<Queue> queue)
: _queue(std::move(queue))
{
  // Do nothing
}

//==============================================================================
const TopicName& Subscription::topic() const
{
  return _queue->topic;
}

//==============================================================================
std::optional<Envelope> Subscription::try_pop()
{
  std::lock_guard<std::mutex> lock(_queue->mutex);
  if (_queue->envelopes.empty())
    return std::nullopt;
  Envelope e = std::move(_queue->envelopes.front());
  _queue->envelopes.pop_front();
  return e;
}

//==============================================================================
std::optional<Envelope> Subscription::pop_for(std::chrono::milliseconds timeout)
{
  std::unique_lock<std::mutex> lock(_queue->mutex);
  if (!_queue->cv.wait_for(lock, timeout,
    [&] { return !_queue->envelopes.empty(); }))
    return std::nullopt;
  Envelope e = std::move(_queue->envelopes.front());
  _queue->envelopes.pop_front();
  return e;
}

//==============================================================================
std::vector<Envelope> Subscription::drain()
{
  std::lock_guard<std::mutex> lock(_queue->mutex);
  std::vector<Envelope> out(
    std::make_move_iterator(_queue->envelopes.begin()),
    std::make_move_iterator(_queue->envelopes.end()));
  _queue->envelopes.clear();
  return out;
}

//==============================================================================
std::size_t Subscription::pending() const
{
  std::lock_guard<std::mutex> lock(_queue->mutex);
  return _queue->envelopes.size();
}

//==============================================================================
void Bus::register_topic(const TopicName& topic, PayloadKind kind)
{
  std::lock_guard<std::mutex> lock(_mutex);
  const auto it = _topics.find(topic);
  if (it == _topics.end())
  {
    _topics.emplace(topic, TopicState{kind, 1, {}});
    return;
  }

  if (it->second.kind != kind)
  {
    throw ConflictingRegistration(
      "topic [" + topic.str() + "] is registered as "
      + std::string(to_string(it->second.kind)) + ", not "
      + std::string(to_string(kind)));
  }
}

//==============================================================================
void Bus::register_standard_topics()
{
  register_topic(topics::Transcript, PayloadKind::Transcript);
  register_topic(topics::Goal, PayloadKind::Goal);
  register_topic(topics::Stop, PayloadKind::Stop);
  register_topic(topics::Say, PayloadKind::SpeechOut);
  register_topic(topics::State, PayloadKind::State);
}

//==============================================================================
bool Bus::is_registered(const TopicName& topic) const
{
  std::lock_guard<std::mutex> lock(_mutex);
  return _topics.count(topic) > 0;
}

//==============================================================================
std::uint64_t Bus::publish(const TopicName& topic, Payload payload)
{
  std::lock_guard<std::mutex> lock(_mutex);
  const auto it = _topics.find(topic);
  if (it == _topics.end())
    throw UnknownTopic("topic [" + topic.str() + "] is not registered");

  auto& state = it->second;
  const auto kind = kind_of(payload);
  if (kind != state.kind)
  {
    throw PayloadKindMismatch(
      "topic [" + topic.str() + "] carries "
      + std::string(to_string(state.kind)) + ", got "
      + std::string(to_string(kind)));
  }

  const std::uint64_t seq = state.next_seq++;
  const std::uint64_t stamp = _next_stamp++;

  // Holding the bus lock while enqueueing makes publish atomic with respect
  // to subscribe().
  auto& subs = state.subscribers;
  for (auto sub = subs.begin(); sub != subs.end(); )
  {
    const auto queue = sub->lock();
    if (!queue)
    {
      sub = subs.erase(sub);
      continue;
    }

    {
      std::lock_guard<std::mutex> qlock(queue->mutex);
      queue->envelopes.push_back(Envelope{topic, seq, stamp, payload});
      if (queue->envelopes.size() > HighWaterMark && !queue->warned)
      {
        queue->warned = true;
        spdlog::warn("subscriber queue on [{}] exceeds {} messages",
          topic.str(), HighWaterMark);
      }
      else if (queue->envelopes.size() <= HighWaterMark / 2)
      {
        queue->warned = false;
      }
    }
    queue->cv.notify_all();
    ++sub;
  }

  return seq;
}

//==============================================================================
Subscription Bus::subscribe(const TopicName& topic)
{
  std::lock_guard<std::mutex> lock(_mutex);
  const auto it = _topics.find(topic);
  if (it == _topics.end())
    throw UnknownTopic("topic [" + topic.str() + "] is not registered");

  auto queue = std::make_shared<Subscription::Queue>(topic);
  it->second.subscribers.push_back(queue);
  return Subscription(std::move(queue));
}

//==============================================================================
std::size_t Bus::subscriber_count(const TopicName& topic) const
{
  std::lock_guard<std::mutex> lock(_mutex);
  const auto it = _topics.find(topic);
  if (it == _topics.end())
    return 0;

  std::size_t count = 0;
  for (const auto& sub : it->second.subscribers)
    count += !sub.expired();
  return count;
}

} // namespace msgbus
} // namespace guidebot
