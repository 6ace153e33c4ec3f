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

#include <guidebot/gateway/Service.hpp>

#include <guidebot/Error.hpp>
#include <guidebot/cloud/Speaker.hpp>
#include <guidebot/gateway/EventLog.hpp>

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <thread>

namespace guidebot {
namespace gateway {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

//==============================================================================
void OutcomeBoard::post(const sim::OutcomeRecord& record)
{
  Callback callback;
  {
    std::lock_guard<std::mutex> lock(_mutex);
    const auto it = _waiting.find(record.transcript_seq);
    if (it != _waiting.end())
    {
      callback = std::move(it->second);
      _waiting.erase(it);
    }
    else
    {
      _ready[record.transcript_seq] = record;
      // Nobody asked for old outcomes; keep the board bounded.
      while (_ready.size() > 1024)
        _ready.erase(_ready.begin());
    }
  }
  _cv.notify_all();

  if (callback)
    callback(record);
}

//==============================================================================
void OutcomeBoard::when_ready(std::uint64_t seq, Callback callback)
{
  std::optional<sim::OutcomeRecord> record;
  {
    std::lock_guard<std::mutex> lock(_mutex);
    const auto it = _ready.find(seq);
    if (it == _ready.end())
    {
      _waiting[seq] = std::move(callback);
      return;
    }
    record = std::move(it->second);
    _ready.erase(it);
  }
  callback(*record);
}

//==============================================================================
std::optional<sim::OutcomeRecord> OutcomeBoard::wait(
  std::uint64_t seq, std::chrono::milliseconds timeout)
{
  std::unique_lock<std::mutex> lock(_mutex);
  if (!_cv.wait_for(lock, timeout, [&] { return _ready.count(seq) > 0; }))
    return std::nullopt;
  auto record = std::move(_ready.at(seq));
  _ready.erase(seq);
  return record;
}

//==============================================================================
InjectResult inject_utterance(
  msgbus::Bus& bus, std::string_view body, std::int64_t timestamp_ms)
{
  json doc;
  try
  {
    doc = json::parse(body);
  }
  catch (const json::parse_error&)
  {
    return InjectRejected{"injection is not valid JSON"};
  }

  if (!doc.is_object())
    return InjectRejected{"injection must be a JSON object"};

  const auto text = doc.find("text");
  if (text == doc.end() || !text->is_string())
    return InjectRejected{"injection needs a string field 'text'"};

  if (const auto type = doc.find("type"); type != doc.end()
    && *type != "utterance")
    return InjectRejected{"unsupported message type"};

  const auto seq = bus.publish(msgbus::topics::Transcript,
      TranscriptMsg{text->get<std::string>(), timestamp_ms, {}});
  return InjectAccepted{seq};
}

//==============================================================================
ServiceOptions parse_listen_address(const std::string& text)
{
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
    throw ValidationError("listen address must look like host:port");

  ServiceOptions options;
  options.address = text.substr(0, colon);
  const auto port = std::string_view(text).substr(colon + 1);
  unsigned int value = 0;
  const auto [ptr, ec] =
    std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc() || ptr != port.data() + port.size() || value > 65535)
    throw ValidationError("invalid port in listen address [" + text + "]");
  options.port = static_cast<unsigned short>(value);
  return options;
}

namespace {

std::int64_t wall_ms()
{
  return std::chrono::duration_cast<std::chrono::milliseconds>(
    std::chrono::system_clock::now().time_since_epoch()).count();
}

json outcome_message(const sim::OutcomeRecord& record)
{
  json j = to_json(record);
  j["type"] = "outcome";
  return j;
}

json error_message(const std::string& error)
{
  return {{"type", "error"}, {"error", error}};
}

class WsSession;

//==============================================================================
struct Shared
{
  Shared(msgbus::Bus& bus_, std::shared_ptr<const nav::SiteMap> site_,
    OutcomeBoard& outcomes_)
  : bus(bus_),
    site(std::move(site_)),
    outcomes(outcomes_),
    map_json(gateway_map_json())
  {
    // Do nothing
  }

  std::string gateway_map_json() const
  {
    return nav::to_json(*site).dump();
  }

  msgbus::Bus& bus;
  std::shared_ptr<const nav::SiteMap> site;
  OutcomeBoard& outcomes;
  const std::string map_json;

  mutable std::mutex mutex;
  std::map<WsSession*, std::weak_ptr<WsSession>> clients;
  std::string last_state;

  void join(WsSession* s, std::weak_ptr<WsSession> w)
  {
    std::lock_guard<std::mutex> lock(mutex);
    clients[s] = std::move(w);
  }

  void leave(WsSession* s)
  {
    std::lock_guard<std::mutex> lock(mutex);
    clients.erase(s);
  }

  std::string state() const
  {
    std::lock_guard<std::mutex> lock(mutex);
    return last_state;
  }

  void broadcast(const std::string& message, bool is_state);
};

//==============================================================================
class WsSession : public std::enable_shared_from_this<WsSession>
{
public:
  WsSession(tcp::socket&& socket, Shared& shared)
  : _ws(std::move(socket)),
    _shared(shared)
  {
    // Do nothing
  }

  ~WsSession()
  {
    _shared.leave(this);
  }

  void run(http::request<http::string_body> request)
  {
    _ws.set_option(
      websocket::stream_base::timeout::suggested(beast::role_type::server));
    _ws.text(true);
    _ws.async_accept(request,
      beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  void send(std::shared_ptr<const std::string> message)
  {
    net::post(_ws.get_executor(),
      beast::bind_front_handler(
        &WsSession::on_send, shared_from_this(), std::move(message)));
  }

  void close()
  {
    net::post(_ws.get_executor(), [self = shared_from_this()]()
      {
        self->_ws.async_close(websocket::close_code::going_away,
        [self](beast::error_code) {});
      });
  }

private:
  void on_accept(beast::error_code ec)
  {
    if (ec)
      return;

    _shared.join(this, weak_from_this());
    if (auto state = _shared.state(); !state.empty())
      send(std::make_shared<const std::string>(std::move(state)));

    do_read();
  }

  void do_read()
  {
    _ws.async_read(_buffer,
      beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t)
  {
    if (ec)
    {
      _shared.leave(this);
      return;
    }

    const std::string body = beast::buffers_to_string(_buffer.data());
    _buffer.consume(_buffer.size());

    const auto result = inject_utterance(_shared.bus, body, wall_ms());
    if (const auto* rejected = std::get_if<InjectRejected>(&result))
    {
      send(std::make_shared<const std::string>(
          error_message(rejected->error).dump()));
    }
    else
    {
      std::weak_ptr<WsSession> weak = weak_from_this();
      _shared.outcomes.when_ready(
        std::get<InjectAccepted>(result).transcript_seq,
        [weak](const sim::OutcomeRecord& record)
        {
          if (const auto self = weak.lock())
          {
            self->send(std::make_shared<const std::string>(
              outcome_message(record).dump()));
          }
        });
    }

    do_read();
  }

  void on_send(std::shared_ptr<const std::string> message)
  {
    _queue.push_back(std::move(message));
    if (_queue.size() > 1)
      return;
    do_write();
  }

  void do_write()
  {
    _ws.async_write(net::buffer(*_queue.front()),
      beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t)
  {
    if (ec)
    {
      _shared.leave(this);
      return;
    }

    _queue.erase(_queue.begin());
    if (!_queue.empty())
      do_write();
  }

  websocket::stream<beast::tcp_stream> _ws;
  beast::flat_buffer _buffer;
  std::vector<std::shared_ptr<const std::string>> _queue;
  Shared& _shared;
};

//==============================================================================
void Shared::broadcast(const std::string& message, bool is_state)
{
  std::vector<std::shared_ptr<WsSession>> targets;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (is_state)
      last_state = message;
    for (const auto& [raw, weak] : clients)
    {
      if (auto s = weak.lock())
        targets.push_back(std::move(s));
    }
  }

  const auto shared_message = std::make_shared<const std::string>(message);
  for (const auto& s : targets)
    s->send(shared_message);
}

//==============================================================================
class HttpSession : public std::enable_shared_from_this<HttpSession>
{
public:
  HttpSession(tcp::socket&& socket, Shared& shared)
  : _stream(std::move(socket)),
    _shared(shared)
  {
    // Do nothing
  }

  void run()
  {
    net::dispatch(_stream.get_executor(),
      beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
  }

private:
  void do_read()
  {
    _parser.emplace();
    _parser->body_limit(64 * 1024);
    _stream.expires_after(std::chrono::seconds(30));
    http::async_read(_stream, _buffer, *_parser,
      beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t)
  {
    if (ec == http::error::end_of_stream)
    {
      _stream.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec)
      return;

    auto request = _parser->release();
    const std::string target(request.target());

    if (websocket::is_upgrade(request))
    {
      if (target != "/stream")
      {
        respond(request, http::status::not_found,
          error_message("no WebSocket endpoint at " + target));
        return;
      }

      _stream.expires_never();
      std::make_shared<WsSession>(_stream.release_socket(), _shared)->run(
        std::move(request));
      return;
    }

    if (request.method() == http::verb::get && target == "/map")
    {
      respond_raw(request, http::status::ok, _shared.map_json);
      return;
    }

    if (request.method() == http::verb::get && target == "/state")
    {
      auto state = _shared.state();
      if (state.empty())
        respond(request, http::status::not_found, error_message("no state yet"));
      else
        respond_raw(request, http::status::ok, state);
      return;
    }

    if (request.method() == http::verb::post && target == "/utterance")
    {
      const auto result = inject_utterance(
        _shared.bus, request.body(), wall_ms());
      if (const auto* rejected = std::get_if<InjectRejected>(&result))
      {
        respond(request, http::status::bad_request,
          error_message(rejected->error));
        return;
      }

      auto self = shared_from_this();
      _shared.outcomes.when_ready(
        std::get<InjectAccepted>(result).transcript_seq,
        [self, request = std::move(request)](const sim::OutcomeRecord& record)
        {
          net::post(self->_stream.get_executor(),
          [self, request, record]()
          {
            self->respond(request, http::status::ok, outcome_message(record));
          });
        });
      return;
    }

    respond(request, http::status::not_found,
      error_message("no endpoint " + std::string(request.method_string())
      + " " + target));
  }

  void respond(const http::request<http::string_body>& request,
    http::status status, const json& body)
  {
    respond_raw(request, status, body.dump());
  }

  void respond_raw(const http::request<http::string_body>& request,
    http::status status, std::string body)
  {
    auto response = std::make_shared<http::response<http::string_body>>(
      status, request.version());
    response->set(http::field::content_type, "application/json");
    response->set(http::field::access_control_allow_origin, "*");
    response->keep_alive(request.keep_alive());
    response->body() = std::move(body);
    response->prepare_payload();

    http::async_write(_stream, *response,
      [self = shared_from_this(), response](beast::error_code ec, std::size_t)
      {
        if (ec)
          return;
        if (response->need_eof())
        {
          beast::error_code ignored;
          self->_stream.socket().shutdown(tcp::socket::shutdown_send, ignored);
          return;
        }
        self->do_read();
      });
  }

  beast::tcp_stream _stream;
  beast::flat_buffer _buffer;
  std::optional<http::request_parser<http::string_body>> _parser;
  Shared& _shared;
};

} // anonymous namespace

//==============================================================================
class Service::Implementation
{
public:
  Implementation(
    msgbus::Bus& bus_,
    std::shared_ptr<const nav::SiteMap> site_,
    OutcomeBoard& outcomes_,
    ServiceOptions options_)
  : options(std::move(options_)),
    shared(bus_, std::move(site_), outcomes_),
    state_sub(bus_.subscribe(msgbus::topics::State)),
    say_sub(bus_.subscribe(msgbus::topics::Say)),
    acceptor(net::make_strand(ioc))
  {
    // Do nothing
  }

  void start()
  {
    beast::error_code ec;
    const auto address = net::ip::make_address(options.address, ec);
    if (ec)
      throw Error("invalid listen address [" + options.address + "]");

    const tcp::endpoint endpoint(address, options.port);
    acceptor.open(endpoint.protocol(), ec);
    if (!ec)
      acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec)
      acceptor.bind(endpoint, ec);
    if (!ec)
      acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec)
    {
      throw Error("cannot listen on " + options.address + ":"
        + std::to_string(options.port) + ": " + ec.message());
    }

    bound_port = acceptor.local_endpoint().port();
    do_accept();

    const int n = std::max(1, options.io_threads);
    for (int i = 0; i < n; ++i)
      io_threads.emplace_back([this]() { ioc.run(); });

    broadcaster = std::jthread([this](std::stop_token stop)
      {
        broadcast_loop(stop);
      });
  }

  void stop()
  {
    if (broadcaster.joinable())
    {
      broadcaster.request_stop();
      broadcaster.join();
    }

    net::post(acceptor.get_executor(), [this]()
      {
        beast::error_code ignored;
        acceptor.close(ignored);
      });

    std::vector<std::shared_ptr<WsSession>> open;
    {
      std::lock_guard<std::mutex> lock(shared.mutex);
      for (const auto& [raw, weak] : shared.clients)
      {
        if (auto s = weak.lock())
          open.push_back(std::move(s));
      }
    }
    for (const auto& s : open)
      s->close();

    ioc.stop();
    for (auto& t : io_threads)
    {
      if (t.joinable())
        t.join();
    }
    io_threads.clear();
  }

  void do_accept()
  {
    acceptor.async_accept(net::make_strand(ioc),
      [this](beast::error_code ec, tcp::socket socket)
      {
        if (ec)
          return;
        std::make_shared<HttpSession>(std::move(socket), shared)->run();
        do_accept();
      });
  }

  void broadcast_loop(std::stop_token stop)
  {
    while (!stop.stop_requested())
    {
      auto first = state_sub.pop_for(std::chrono::milliseconds(20));
      std::vector<msgbus::Envelope> batch;
      if (first)
        batch.push_back(std::move(*first));
      for (auto* sub : {&state_sub, &say_sub})
      {
        auto more = sub->drain();
        batch.insert(batch.end(),
          std::make_move_iterator(more.begin()),
          std::make_move_iterator(more.end()));
      }

      std::sort(batch.begin(), batch.end(),
        [](const msgbus::Envelope& a, const msgbus::Envelope& b)
        {
          return a.stamp < b.stamp;
        });

      for (const auto& e : batch)
      {
        const auto kind = kind_of(e.payload);
        const json message = {
          {"type", to_string(kind)},
          {"seq", e.seq},
          {"payload", guidebot::to_json(e.payload)}
        };
        shared.broadcast(message.dump(), kind == PayloadKind::State);
      }
    }
  }

  ServiceOptions options;
  Shared shared;
  msgbus::Subscription state_sub;
  msgbus::Subscription say_sub;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::vector<std::thread> io_threads;
  std::jthread broadcaster;
  unsigned short bound_port = 0;
};

//==============================================================================
Service::Service(
  msgbus::Bus& bus,
  std::shared_ptr<const nav::SiteMap> site,
  OutcomeBoard& outcomes,
  ServiceOptions options)
: _pimpl(std::make_unique<Implementation>(
      bus, std::move(site), outcomes, std::move(options)))
{
  // Do nothing
}

//==============================================================================
Service::~Service()
{
  _pimpl->stop();
}

//==============================================================================
void Service::start()
{
  _pimpl->start();
}

//==============================================================================
void Service::stop()
{
  _pimpl->stop();
}

//==============================================================================
unsigned short Service::port() const
{
  return _pimpl->bound_port;
}

//==============================================================================
std::size_t Service::stream_clients() const
{
  std::lock_guard<std::mutex> lock(_pimpl->shared.mutex);
  return _pimpl->shared.clients.size();
}

//==============================================================================
class LiveSession::Implementation
{
public:
  Implementation(
    msgbus::Bus& bus,
    std::shared_ptr<const nav::SiteMap> site,
    speech::WakeConfig wake,
    speech::Lexicon lexicon,
    sim::SimConfig sim,
    ServiceOptions service_options,
    std::unique_ptr<cloud::TtsClient> tts_,
    std::optional<std::string> audio_dir)
  : session(site, std::move(wake), std::move(lexicon), std::move(sim), bus),
    tts(tts_ ? std::move(tts_) : std::make_unique<cloud::MockTtsClient>()),
    sink(audio_dir ?
      std::unique_ptr<cloud::AudioSink>(
        std::make_unique<cloud::DirectoryAudioSink>(*audio_dir)) :
      std::unique_ptr<cloud::AudioSink>(
        std::make_unique<cloud::DiscardAudioSink>())),
    speaker(bus, *tts, *sink),
    service(bus, std::move(site), outcomes, std::move(service_options))
  {
    session.set_outcome_listener([this](const sim::OutcomeRecord& record)
      {
        outcomes.post(record);
      });
  }

  OutcomeBoard outcomes;
  sim::Session session;
  std::unique_ptr<cloud::TtsClient> tts;
  std::unique_ptr<cloud::AudioSink> sink;
  cloud::SpeakerService speaker;
  Service service;
  std::jthread session_thread;
  std::jthread speaker_thread;
};

//==============================================================================
LiveSession::LiveSession(
  std::shared_ptr<const nav::SiteMap> site,
  speech::WakeConfig wake,
  speech::Lexicon lexicon,
  sim::SimConfig sim,
  ServiceOptions service,
  std::unique_ptr<cloud::TtsClient> tts,
  std::optional<std::string> audio_dir)
: _pimpl(std::make_unique<Implementation>(
      _bus, std::move(site), std::move(wake), std::move(lexicon),
      std::move(sim), std::move(service), std::move(tts),
      std::move(audio_dir)))
{
  // Do nothing
}

//==============================================================================
LiveSession::~LiveSession()
{
  stop();
}

//==============================================================================
void LiveSession::start()
{
  _pimpl->service.start();
  _pimpl->session_thread = std::jthread([this](std::stop_token stop)
      {
        _pimpl->session.run(stop);
      });
  _pimpl->speaker_thread = std::jthread([this](std::stop_token stop)
      {
        _pimpl->speaker.run(stop);
      });
}

//==============================================================================
void LiveSession::stop()
{
  for (auto* t : {&_pimpl->session_thread, &_pimpl->speaker_thread})
  {
    if (t->joinable())
    {
      t->request_stop();
      t->join();
    }
  }
  _pimpl->service.stop();
}

//==============================================================================
unsigned short LiveSession::port() const
{
  return _pimpl->service.port();
}

} // namespace gateway
} // namespace guidebot
