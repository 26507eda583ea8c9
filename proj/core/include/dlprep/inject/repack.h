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

#ifndef DLPREP_INJECT_REPACK_H_
#define DLPREP_INJECT_REPACK_H_

#include <filesystem>
#include <stdexcept>
#include <string>

namespace dlprep::inject {

class HookError : public std::runtime_error {
 public:
  enum class Code { kMissing, kFailed };

  HookError(Code code, const std::string& message, std::string stderr_text = {})
      : std::runtime_error(message), code_(code), stderr_(std::move(stderr_text)) {}
  Code code() const { return code_; }
  const std::string& stderr_text() const { return stderr_; }

 private:
  Code code_;
  std::string stderr_;
};

struct RepackResult {
  std::filesystem::path artifact;
  std::string command;  // as run, placeholders expanded
  std::string stdout_text;
  std::string stderr_text;
};

// Runs the external assembler. |command_template| uses {in} for the smali
// tree and {out} for the artifact path; both are shell-quoted on expansion.
// Throws HookError(kMissing) for an empty template and HookError(kFailed)
// for a nonzero exit or a missing artifact.
RepackResult Repack(const std::filesystem::path& tree, const std::filesystem::path& artifact,
                    const std::string& command_template);

}  // namespace dlprep::inject

#endif  // DLPREP_INJECT_REPACK_H_
