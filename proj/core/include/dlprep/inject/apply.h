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

#ifndef DLPREP_INJECT_APPLY_H_
#define DLPREP_INJECT_APPLY_H_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlprep/inject/plan.h"

namespace dlprep::inject {

class ApplyError : public std::runtime_error {
 public:
  enum class Code { kStaleTree, kAlreadyInjected, kLocked, kIo };

  ApplyError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct PatchOutcome {
  std::string path;
  size_t line_index = 0;
  PatchKind kind = PatchKind::kRotationConst;
  bool applied = false;
};

struct PatchReport {
  std::vector<PatchOutcome> outcomes;  // plan order
  std::vector<std::string> files_written;
};

// Relative paths of smali files under |tree| that already carry the marker.
std::vector<std::string> FindMarkedFiles(const std::filesystem::path& tree);

// New contents of every file the plan touches, marker included. Throws
// ApplyError(kStaleTree) when a file no longer holds a patch's original
// lines.
std::map<std::string, std::string> RenderPatchedFiles(const InjectionPlan& plan,
                                                      const std::filesystem::path& tree);

// Applies the plan all-or-nothing: the patched copy is staged beside the
// tree and swapped in with renames. Refuses trees that carry the marker
// anywhere, and trees another apply holds the lock on.
PatchReport Apply(const InjectionPlan& plan, const std::filesystem::path& tree);

// The plan as a unified diff against the current tree (three lines of
// context), for dry runs.
std::string UnifiedDiff(const InjectionPlan& plan, const std::filesystem::path& tree);

}  // namespace dlprep::inject

#endif  // DLPREP_INJECT_APPLY_H_
