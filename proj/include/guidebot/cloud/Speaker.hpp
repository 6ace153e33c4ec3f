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

#ifndef GUIDEBOT__CLOUD__SPEAKER_HPP
#define GUIDEBOT__CLOUD__SPEAKER_HPP

#include <guidebot/cloud/SpeechClients.hpp>
#include <guidebot/msgbus/Bus.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stop_token>
#include <string>
#include <vector>

namespace guidebot {
namespace cloud {

//==============================================================================
class AudioSink
{
public:
  virtual void play(std::uint64_t seq, std::int64_t timestamp_ms,
    const AudioClip& clip) = 0;
  virtual ~AudioSink() = default;
};

/// Writes each clip to <dir>/<seq>-<timestamp>.<ext>.
class DirectoryAudioSink : public AudioSink
{
public:

  /// Creates the directory if needed.
  explicit DirectoryAudioSink(std::filesystem::path dir);

  void play(std::uint64_t seq, std::int64_t timestamp_ms,
    const AudioClip& clip) final;

  /// Files written so far, in order.
  const std::vector<std::filesystem::path>& written() const { return _written; }

  /// File extension used for a clip format label.
  static std::string extension_for(const std::string& format_label);

private:
  std::filesystem::path _dir;
  std::vector<std::filesystem::path> _written;
};

/// Drops every clip.
class DiscardAudioSink : public AudioSink
{
public:
  void play(std::uint64_t, std::int64_t, const AudioClip&) final {}
};

/// Keeps clips in memory, in arrival order.
class MemoryAudioSink : public AudioSink
{
public:
  struct Entry
  {
    std::uint64_t seq;
    std::int64_t timestamp_ms;
    AudioClip clip;
  };

  void play(std::uint64_t seq, std::int64_t timestamp_ms,
    const AudioClip& clip) final
  {
    _clips.push_back({seq, timestamp_ms, clip});
  }

  const std::vector<Entry>& clips() const { return _clips; }

private:
  std::vector<Entry> _clips;
};

//==============================================================================
/// Consumes speech.say, synthesizes every message and hands the clip to the
/// sink. Synthesis or sink failures are logged and skipped; they never stop
/// the service.
class SpeakerService
{
public:

  using Clock = std::function<std::int64_t()>;

  /// Subscribes to speech.say immediately. The clock supplies clip
  /// timestamps; the default is wall-clock milliseconds.
  SpeakerService(
    msgbus::Bus& bus,
    TtsClient& client,
    AudioSink& sink,
    Clock clock = {});

  /// Processes everything queued so far. Returns the number of messages
  /// handled, successful or not.
  std::size_t drain();

  /// Service loop. Returns once stop is requested.
  void run(std::stop_token stop);

  std::size_t spoken() const { return _spoken; }
  std::size_t failed() const { return _failed; }

private:
  void handle(const msgbus::Envelope& envelope);

  msgbus::Subscription _subscription;
  TtsClient& _client;
  AudioSink& _sink;
  Clock _clock;
  std::size_t _spoken = 0;
  std::size_t _failed = 0;
};

} // namespace cloud
} // namespace guidebot

#endif // GUIDEBOT__CLOUD__SPEAKER_HPP
