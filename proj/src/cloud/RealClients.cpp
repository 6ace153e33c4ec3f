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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <guidebot/cloud/SigV4.hpp>
#include <guidebot/cloud/SpeechClients.hpp>

#include <guidebot/Error.hpp>

#include <json.hpp>

#include <openssl/evp.h>

#include <ctime>

namespace guidebot {
namespace cloud {

namespace {

std::string base64(const std::vector<std::uint8_t>& bytes)
{
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(
    reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
    static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string amz_now()
{
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &utc);
  return buf;
}

httplib::Client make_client(const std::string& endpoint,
  std::chrono::milliseconds timeout)
{
  httplib::Client client(endpoint);
  const auto sec = timeout.count() / 1000;
  const auto usec = (timeout.count() % 1000) * 1000;
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  return client;
}

std::string host_of(const std::string& endpoint)
{
  auto rest = endpoint;
  if (const auto p = rest.find("://"); p != std::string::npos)
    rest = rest.substr(p + 3);
  if (const auto p = rest.find('/'); p != std::string::npos)
    rest = rest.substr(0, p);
  return rest;
}

} // anonymous namespace

//==============================================================================
GoogleSttClient::GoogleSttClient(
  SpeechClientConfig config, std::string language_code)
: _config(std::move(config)),
  _language_code(std::move(language_code))
{
  _config.validate();
  if (_config.endpoint.empty())
    _config.endpoint = DefaultEndpoint;
}

//==============================================================================
SttResult GoogleSttClient::transcribe(const AudioClip& audio)
{
  if (audio.bytes.empty())
    throw EmptyAudio("cannot transcribe an empty clip");

  const nlohmann::json body = {
    {"config", {
        {"encoding", "LINEAR16"},
        {"sampleRateHertz", 16000},
        {"languageCode", _language_code}
      }},
    {"audio", {{"content", base64(audio.bytes)}}}
  };

  auto client = make_client(_config.endpoint, _config.timeout);
  const auto res = client.Post(
    "/v1/speech:recognize?key=" + _config.credential(),
    body.dump(), "application/json");

  if (!res)
  {
    throw ServiceUnavailable(
      "speech-to-text request failed: " + httplib::to_string(res.error()));
  }

  if (res->status != 200)
  {
    throw ServiceUnavailable(
      "speech-to-text returned HTTP " + std::to_string(res->status));
  }

  SttResult result;
  try
  {
    const auto reply = nlohmann::json::parse(res->body);
    const auto results = reply.find("results");
    if (results == reply.end() || results->empty())
      return result;

    const auto& best = (*results)[0].at("alternatives").at(0);
    result.text = best.value("transcript", "");
    if (best.contains("confidence"))
      result.confidence = best["confidence"].get<double>();
  }
  catch (const nlohmann::json::exception& e)
  {
    throw ServiceUnavailable(
      std::string("speech-to-text reply is malformed: ") + e.what());
  }

  return result;
}

//==============================================================================
PollyTtsClient::PollyTtsClient(
  SpeechClientConfig config, std::string region, std::string voice_id)
: _config(std::move(config)),
  _region(std::move(region)),
  _voice_id(std::move(voice_id))
{
  _config.validate();
  if (_config.endpoint.empty())
    _config.endpoint = "https://polly." + _region + ".amazonaws.com";
}

//==============================================================================
AudioClip PollyTtsClient::synthesize(std::string_view text)
{
  if (text.empty())
    throw EmptyText("cannot synthesize empty text");

  AwsCredentials credentials;
  try
  {
    credentials = AwsCredentials::parse(_config.credential());
  }
  catch (const ValidationError& e)
  {
    throw ServiceUnavailable(e.what());
  }

  SignableRequest request;
  request.method = "POST";
  request.path = "/v1/speech";
  request.payload = nlohmann::json{
    {"OutputFormat", "mp3"},
    {"Text", std::string(text)},
    {"VoiceId", _voice_id}
  }.dump();
  request.headers["content-type"] = "application/json";
  request.headers["host"] = host_of(_config.endpoint);

  const auto authorization = sign_v4(
    request, credentials, _region, "polly", amz_now());

  httplib::Headers headers;
  for (const auto& [name, value] : request.headers)
  {
    if (name != "host" && name != "content-type")
      headers.emplace(name, value);
  }
  headers.emplace("Authorization", authorization);

  auto client = make_client(_config.endpoint, _config.timeout);
  const auto res = client.Post(
    request.path, headers, request.payload, "application/json");

  if (!res)
  {
    throw ServiceUnavailable(
      "text-to-speech request failed: " + httplib::to_string(res.error()));
  }

  if (res->status != 200)
  {
    throw ServiceUnavailable(
      "text-to-speech returned HTTP " + std::to_string(res->status));
  }

  return AudioClip{
    std::vector<std::uint8_t>(res->body.begin(), res->body.end()), "mp3"};
}

} // namespace cloud
} // namespace guidebot
