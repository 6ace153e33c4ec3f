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

#ifndef GUIDEBOT__GATEWAY__CLI_HPP
#define GUIDEBOT__GATEWAY__CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace guidebot {
namespace gateway {

enum ExitCode : int
{
  ExitOk = 0,
  ExitValidation = 1,
  ExitUsage = 2
};

/// Entry point of the guidebot tool. args excludes the program name.
///
///   run      --map F --lexicon F [--wake P] [--tick-ms N] [--listen H:P]
///   replay   --map F --lexicon F --script F [--wake P] [--tick-ms N]
///   validate --map F --lexicon F
///
/// Returns 0 on success, 1 when an input file fails validation and 2 for bad
/// usage.
int cli_run(const std::vector<std::string>& args, std::ostream& out,
  std::ostream& err);

} // namespace gateway
} // namespace guidebot

#endif // GUIDEBOT__GATEWAY__CLI_HPP
