// Copyright 2026 The dlprep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DLPREP_UTIL_PROCESS_H_
#define DLPREP_UTIL_PROCESS_H_

#include <map>
#include <string>
#include <string_view>

namespace dlprep::util {

struct CommandResult {
  int exit_code = -1;  // 128 + signal number when killed by a signal
  std::string stdout_text;
  std::string stderr_text;
};

// Single-quotes |s| for /bin/sh.
std::string ShellQuote(std::string_view s);

// Replaces each "{key}" in |tmpl| with the shell-quoted value. Unknown
// placeholders are left as written.
std::string ExpandTemplate(std::string_view tmpl, const std::map<std::string, std::string>& values);

// Runs |command| through /bin/sh -c and collects both output streams.
// Throws std::system_error if the shell cannot be started.
CommandResult RunShell(const std::string& command);

}  // namespace dlprep::util

#endif  // DLPREP_UTIL_PROCESS_H_
