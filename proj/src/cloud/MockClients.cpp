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

#include <guidebot/cloud/SpeechClients.hpp>

#include <guidebot/Error.hpp>

#include <cstdlib>

namespace guidebot {
namespace cloud {

//==============================================================================
AudioClip AudioClip::from_text(std::string_view text, std::string format_label)
{
  return AudioClip{
    std::vector<std::uint8_t>(text.begin(), text.end()),
    std::move(format_label)
  };
}

//==============================================================================
void SpeechClientConfig::validate() const
{
  if (timeout.count() <= 0)
    throw ValidationError("speech client timeout must be positive");
}

//==============================================================================
std::string SpeechClientConfig::credential() const
{
  if (credential_ref.empty())
    throw ServiceUnavailable("no credential variable configured");

  const char* value = std::getenv(credential_ref.c_str());
  if (!value || *value == '\0')
  {
    throw ServiceUnavailable(
      "credential variable " + credential_ref + " is not set");
  }
  return value;
}

//==============================================================================
void MockSttClient::script(const AudioClip& clip, SttResult result)
{
  std::lock_guard<std::mutex> lock(_mutex);
  _scripts[clip.bytes].push_back(std::move(result));
}

//==============================================================================
SttResult MockSttClient::transcribe(const AudioClip& audio)
{
  if (audio.bytes.empty())
    throw EmptyAudio("cannot transcribe an empty clip");

  std::lock_guard<std::mutex> lock(_mutex);
  const auto it = _scripts.find(audio.bytes);
  if (it == _scripts.end() || it->second.empty())
    throw ServiceUnavailable("mock recognizer has no scripted result left");

  SttResult result = std::move(it->second.front());
  it->second.pop_front();
  return result;
}

//==============================================================================
std::size_t MockSttClient::remaining() const
{
  std::lock_guard<std::mutex> lock(_mutex);
  std::size_t count = 0;
  for (const auto& [clip, queue] : _scripts)
    count += queue.size();
  return count;
}

//==============================================================================
void MockTtsClient::set_unavailable(bool unavailable)
{
  std::lock_guard<std::mutex> lock(_mutex);
  _unavailable = unavailable;
}

//==============================================================================
AudioClip MockTtsClient::synthesize(std::string_view text)
{
  std::lock_guard<std::mutex> lock(_mutex);
  ++_calls;

  if (text.empty())
    throw EmptyText("cannot synthesize empty text");

  if (_unavailable)
    throw ServiceUnavailable("mock synthesizer is unavailable");

  return AudioClip::from_text(text, "mock");
}

//==============================================================================
std::size_t MockTtsClient::calls() const
{
  std::lock_guard<std::mutex> lock(_mutex);
  return _calls;
}

} // namespace cloud
} // namespace guidebot
