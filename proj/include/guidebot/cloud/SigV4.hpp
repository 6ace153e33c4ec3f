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

#ifndef GUIDEBOT__CLOUD__SIGV4_HPP
#define GUIDEBOT__CLOUD__SIGV4_HPP

#include <map>
#include <string>
#include <string_view>

namespace guidebot {
namespace cloud {

struct AwsCredentials
{
  std::string access_key_id;
  std::string secret_access_key;
  std::string session_token;

  /// Parses "<key id>:<secret>[:<token>]". Throws ValidationError.
  static AwsCredentials parse(std::string_view text);
};

struct SignableRequest
{
  std::string method;
  /// Absolute path, already URI-encoded.
  std::string path;
  /// Canonical query string, already sorted and encoded. Usually empty.
  std::string query;
  /// Lowercase header names. Must include "host".
  std::map<std::string, std::string> headers;
  std::string payload;
};

std::string sha256_hex(std::string_view data);

/// Adds "x-amz-date" (and "x-amz-security-token" when a session token is set)
/// to the request headers, then returns the Authorization header value for
/// AWS Signature Version 4. amz_date has the form "20240101T000000Z".
std::string sign_v4(
  SignableRequest& request,
  const AwsCredentials& credentials,
  std::string_view region,
  std::string_view service,
  std::string_view amz_date);

} // namespace cloud
} // namespace guidebot

#endif // GUIDEBOT__CLOUD__SIGV4_HPP
