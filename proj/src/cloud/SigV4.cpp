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

#include <guidebot/cloud/SigV4.hpp>

#include <guidebot/Error.hpp>

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <array>

namespace guidebot {
namespace cloud {

namespace {

std::string to_hex(const unsigned char* data, std::size_t size)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i)
  {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0x0f]);
  }
  return out;
}

std::string hmac(std::string_view key, std::string_view data)
{
  std::array<unsigned char, EVP_MAX_MD_SIZE> out{};
  unsigned int size = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
    reinterpret_cast<const unsigned char*>(data.data()), data.size(),
    out.data(), &size);
  return std::string(reinterpret_cast<const char*>(out.data()), size);
}

// Trims and collapses runs of spaces.
std::string canonical_value(std::string_view value)
{
  std::string out;
  bool pending_space = false;
  for (const char c : value)
  {
    if (c == ' ' || c == '\t')
    {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space)
      out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

} // anonymous namespace

//==============================================================================
AwsCredentials AwsCredentials::parse(std::string_view text)
{
  AwsCredentials creds;
  const auto first = text.find(':');
  if (first == std::string_view::npos || first == 0)
    throw ValidationError("AWS credential must look like <key id>:<secret>");

  creds.access_key_id = std::string(text.substr(0, first));
  auto rest = text.substr(first + 1);
  const auto second = rest.find(':');
  creds.secret_access_key = std::string(rest.substr(0, second));
  if (second != std::string_view::npos)
    creds.session_token = std::string(rest.substr(second + 1));

  if (creds.secret_access_key.empty())
    throw ValidationError("AWS credential has an empty secret");

  return creds;
}

//==============================================================================
std::string sha256_hex(std::string_view data)
{
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(),
    digest.data());
  return to_hex(digest.data(), digest.size());
}

//==============================================================================
std::string sign_v4(
  SignableRequest& request,
  const AwsCredentials& credentials,
  std::string_view region,
  std::string_view service,
  std::string_view amz_date)
{
  request.headers["x-amz-date"] = std::string(amz_date);
  if (!credentials.session_token.empty())
    request.headers["x-amz-security-token"] = credentials.session_token;

  std::string canonical_headers;
  std::string signed_headers;
  for (const auto& [name, value] : request.headers)
  {
    canonical_headers += name + ":" + canonical_value(value) + "\n";
    if (!signed_headers.empty())
      signed_headers.push_back(';');
    signed_headers += name;
  }

  const std::string canonical_request =
    request.method + "\n"
    + request.path + "\n"
    + request.query + "\n"
    + canonical_headers + "\n"
    + signed_headers + "\n"
    + sha256_hex(request.payload);

  const std::string date(amz_date.substr(0, 8));
  const std::string scope = date + "/" + std::string(region) + "/"
    + std::string(service) + "/aws4_request";

  const std::string string_to_sign =
    "AWS4-HMAC-SHA256\n"
    + std::string(amz_date) + "\n"
    + scope + "\n"
    + sha256_hex(canonical_request);

  const std::string k_date = hmac("AWS4" + credentials.secret_access_key, date);
  const std::string k_region = hmac(k_date, region);
  const std::string k_service = hmac(k_region, service);
  const std::string k_signing = hmac(k_service, "aws4_request");
  const std::string raw = hmac(k_signing, string_to_sign);
  const std::string signature = to_hex(
    reinterpret_cast<const unsigned char*>(raw.data()), raw.size());

  return "AWS4-HMAC-SHA256 Credential=" + credentials.access_key_id + "/"
    + scope + ", SignedHeaders=" + signed_headers + ", Signature=" + signature;
}

} // namespace cloud
} // namespace guidebot
