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

#ifndef GUIDEBOT__GATEWAY__SERVICE_HPP
#define GUIDEBOT__GATEWAY__SERVICE_HPP

#include <guidebot/cloud/SpeechClients.hpp>
#include <guidebot/msgbus/Bus.hpp>
#include <guidebot/nav/SiteMap.hpp>
#include <guidebot/sim/Session.hpp>

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

namespace guidebot {
namespace gateway {

//==============================================================================
/// Hands transcript outcomes from the session thread to whoever injected the
/// transcript.
class OutcomeBoard
{
public:

  using Callback = std::function<void(const sim::OutcomeRecord&)>;

  /// Called from the session's outcome listener.
  void post(const sim::OutcomeRecord& record);

  /// Runs the callback once the outcome for this transcript seq is posted,
  /// immediately if it already was. The callback may run on the posting
  /// thread.
  void when_ready(std::uint64_t transcript_seq, Callback callback);

  /// Blocking variant of when_ready().
  std::optional<sim::OutcomeRecord> wait(
    std::uint64_t transcript_seq, std::chrono::milliseconds timeout);

private:
  std::mutex _mutex;
  std::condition_variable _cv;
  std::map<std::uint64_t, sim::OutcomeRecord> _ready;
  std::map<std::uint64_t, Callback> _waiting;
};

//==============================================================================
struct InjectAccepted
{
  std::uint64_t transcript_seq = 0;
};

struct InjectRejected
{
  std::string error;
};

using InjectResult = std::variant<InjectAccepted, InjectRejected>;

/// Validates an injection body {"text": "..."} and publishes it on
/// speech.transcript. Anything else is rejected without touching the bus.
InjectResult inject_utterance(
  msgbus::Bus& bus, std::string_view body, std::int64_t timestamp_ms);

//==============================================================================
struct ServiceOptions
{
  std::string address = "127.0.0.1";
  /// 0 picks a free port; see Service::port().
  unsigned short port = 8765;
  int io_threads = 2;
};

/// Parses "host:port". Throws ValidationError.
ServiceOptions parse_listen_address(const std::string& text);

/// HTTP and WebSocket front end of a live session.
///
///   GET  /map         the loaded site in the map-file schema
///   GET  /state       latest robot.state snapshot
///   POST /utterance   {"text": "..."} -> outcome reply
///   GET  /stream      WebSocket: pushes StateMsg and SpeechOutMsg events and
///                     accepts {"text": "..."} injections
///
/// See docs/wire-protocol.md for the exact message shapes.
class Service
{
public:

  Service(
    msgbus::Bus& bus,
    std::shared_ptr<const nav::SiteMap> site,
    OutcomeBoard& outcomes,
    ServiceOptions options = {});

  ~Service();

  /// Binds and starts serving. Throws Error if the address cannot be bound.
  void start();

  /// Stops accepting, closes connections and joins all threads.
  void stop();

  /// Bound port, valid after start().
  unsigned short port() const;

  /// Number of open WebSocket connections.
  std::size_t stream_clients() const;

  class Implementation;
private:
  std::unique_ptr<Implementation> _pimpl;
};

//==============================================================================
/// A session running on its own thread behind a Service, with speech output
/// going to a TTS client and audio sink.
class LiveSession
{
public:

  /// A null tts uses MockTtsClient. Without an audio directory the clips
  /// are discarded.
  LiveSession(
    std::shared_ptr<const nav::SiteMap> site,
    speech::WakeConfig wake,
    speech::Lexicon lexicon,
    sim::SimConfig sim,
    ServiceOptions service,
    std::unique_ptr<cloud::TtsClient> tts = nullptr,
    std::optional<std::string> audio_dir = std::nullopt);

  ~LiveSession();

  void start();
  void stop();

  unsigned short port() const;
  msgbus::Bus& bus() { return _bus; }

  class Implementation;
private:
  msgbus::Bus _bus;
  std::unique_ptr<Implementation> _pimpl;
};

} // namespace gateway
} // namespace guidebot

#endif // GUIDEBOT__GATEWAY__SERVICE_HPP
