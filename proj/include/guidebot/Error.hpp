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

#ifndef GUIDEBOT__ERROR_HPP
#define GUIDEBOT__ERROR_HPP

#include <stdexcept>
#include <string>

namespace guidebot {

//==============================================================================
/// Base class for every error raised by the guidebot libraries.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define GUIDEBOT_DEFINE_ERROR(Name) \
  class Name : public Error \
  { \
  public: \
    using Error::Error; \
  }

// msgbus
GUIDEBOT_DEFINE_ERROR(InvalidTopicName);
GUIDEBOT_DEFINE_ERROR(UnknownTopic);
GUIDEBOT_DEFINE_ERROR(PayloadKindMismatch);
GUIDEBOT_DEFINE_ERROR(ConflictingRegistration);

// site and lexicon files
GUIDEBOT_DEFINE_ERROR(SchemaError);
GUIDEBOT_DEFINE_ERROR(ValidationError);
GUIDEBOT_DEFINE_ERROR(UnknownLocation);

// speech services
GUIDEBOT_DEFINE_ERROR(ServiceUnavailable);
GUIDEBOT_DEFINE_ERROR(EmptyAudio);
GUIDEBOT_DEFINE_ERROR(EmptyText);

#undef GUIDEBOT_DEFINE_ERROR

} // namespace guidebot

#endif // GUIDEBOT__ERROR_HPP
