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

#ifndef GUIDEBOT__CLOUD__SPEECHCLIENTS_HPP
#define GUIDEBOT__CLOUD__SPEECHCLIENTS_HPP

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guidebot {
namespace cloud {

//==============================================================================
struct AudioClip
{
  std::vector<std::uint8_t> bytes;
  /// e.g. "pcm16-16k", "mp3", "mock"
  std::string format_label;

  static AudioClip from_text(std::string_view text, std::string format_label);

  friend bool operator==(const AudioClip&, const AudioClip&) = default;
};

struct SttResult
{
  std::string text;
  std::optional<double> confidence;

  friend bool operator==(const SttResult&, const SttResult&) = default;
};

/// Connection settings for a speech service. The credential itself is never
/// stored here, only the name of the environment variable that holds it.
struct SpeechClientConfig
{
  std::string endpoint;
  std::string credential_ref;
  std::chrono::milliseconds timeout{5000};

  /// Throws ValidationError if the timeout is not positive.
  void validate() const;

  /// Value of the referenced environment variable. Throws ServiceUnavailable
  /// if it is unset.
  std::string credential() const;
};

//==============================================================================
class SttClient
{
public:
  /// Throws EmptyAudio or ServiceUnavailable.
  virtual SttResult transcribe(const AudioClip& audio) = 0;
  virtual ~SttClient() = default;
};

class TtsClient
{
public:
  /// Throws EmptyText or ServiceUnavailable.
  virtual AudioClip synthesize(std::string_view text) = 0;
  virtual ~TtsClient() = default;
};

//==============================================================================
/// Offline recognizer that replays scripted results. Each distinct clip
/// (compared by its bytes) owns a FIFO of results.
class MockSttClient : public SttClient
{
public:

  void script(const AudioClip& clip, SttResult result);

  /// Throws ServiceUnavailable once the clip's script is exhausted.
  SttResult transcribe(const AudioClip& audio) final;

  /// Results still queued across all clips.
  std::size_t remaining() const;

private:
  mutable std::mutex _mutex;
  std::map<std::vector<std::uint8_t>, std::deque<SttResult>> _scripts;
};

/// Offline synthesizer. The clip bytes are the UTF-8 text itself, with format
/// label "mock".
class MockTtsClient : public TtsClient
{
public:

  /// Every following call throws ServiceUnavailable until reset.
  void set_unavailable(bool unavailable);

  AudioClip synthesize(std::string_view text) final;

  std::size_t calls() const;

private:
  mutable std::mutex _mutex;
  bool _unavailable = false;
  std::size_t _calls = 0;
};

//==============================================================================
/// Google Cloud Speech-to-Text v1 "speech:recognize" over HTTPS. The
/// credential is an API key. Expects "pcm16-16k" clips.
class GoogleSttClient : public SttClient
{
public:

  static constexpr const char* DefaultEndpoint =
    "https://speech.googleapis.com";

  GoogleSttClient(SpeechClientConfig config, std::string language_code =
    "en-US");

  SttResult transcribe(const AudioClip& audio) final;

private:
  SpeechClientConfig _config;
  std::string _language_code;
};

/// Amazon Polly "SynthesizeSpeech" over HTTPS, signed with AWS Signature
/// Version 4. The referenced credential has the form
/// "<access key id>:<secret access key>[:<session token>]".
class PollyTtsClient : public TtsClient
{
public:

  /// Endpoint defaults to https://polly.<region>.amazonaws.com when empty.
  PollyTtsClient(
    SpeechClientConfig config,
    std::string region = "us-east-1",
    std::string voice_id = "Joanna");

  AudioClip synthesize(std::string_view text) final;

private:
  SpeechClientConfig _config;
  std::string _region;
  std::string _voice_id;
};

} // namespace cloud
} // namespace guidebot

#endif // GUIDEBOT__CLOUD__SPEECHCLIENTS_HPP
