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

#include <guidebot/cloud/Speaker.hpp>

#include <guidebot/Error.hpp>

#include <spdlog/spdlog.h>

#include <chrono>
#include <fstream>

namespace guidebot {
namespace cloud {

//==============================================================================
DirectoryAudioSink::DirectoryAudioSink(std::filesystem::path dir)
: _dir(std::move(dir))
{
  std::filesystem::create_directories(_dir);
}

//==============================================================================
std::string DirectoryAudioSink::extension_for(const std::string& label)
{
  if (label.rfind("pcm", 0) == 0)
    return "pcm";
  if (label == "ogg_vorbis")
    return "ogg";
  if (label.empty())
    return "bin";
  return label;
}

//==============================================================================
void DirectoryAudioSink::play(
  std::uint64_t seq, std::int64_t timestamp_ms, const AudioClip& clip)
{
  const auto path = _dir / (std::to_string(seq) + "-"
    + std::to_string(timestamp_ms) + "." + extension_for(clip.format_label));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(clip.bytes.data()),
    static_cast<std::streamsize>(clip.bytes.size()));
  if (!out)
    throw Error("could not write clip to " + path.string());

  _written.push_back(path);
}

//==============================================================================
SpeakerService::SpeakerService(
  msgbus::Bus& bus,
  TtsClient& client,
  AudioSink& sink,
  Clock clock)
: _subscription(bus.subscribe(msgbus::topics::Say)),
  _client(client),
  _sink(sink),
  _clock(std::move(clock))
{
  if (!_clock)
  {
    _clock = []()
      {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now().time_since_epoch()).count();
      };
  }
}

//==============================================================================
std::size_t SpeakerService::drain()
{
  std::size_t handled = 0;
  while (const auto envelope = _subscription.try_pop())
  {
    handle(*envelope);
    ++handled;
  }
  return handled;
}

//==============================================================================
void SpeakerService::run(std::stop_token stop)
{
  while (!stop.stop_requested())
  {
    if (const auto envelope =
      _subscription.pop_for(std::chrono::milliseconds(50)))
      handle(*envelope);
  }
}

//==============================================================================
void SpeakerService::handle(const msgbus::Envelope& envelope)
{
  const auto* msg = std::get_if<SpeechOutMsg>(&envelope.payload);
  if (!msg)
    return;

  try
  {
    const AudioClip clip = _client.synthesize(msg->text);
    _sink.play(envelope.seq, _clock(), clip);
    ++_spoken;
  }
  catch (const std::exception& e)
  {
    ++_failed;
    spdlog::warn("speech.say #{} not spoken: {}", envelope.seq, e.what());
  }
}

} // namespace cloud
} // namespace guidebot
