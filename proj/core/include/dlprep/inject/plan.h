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

#ifndef DLPREP_INJECT_PLAN_H_
#define DLPREP_INJECT_PLAN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlprep/locate/locator.h"
#include "dlprep/locate/matcher.h"
#include "dlprep/smali/ast.h"

namespace dlprep::inject {

struct PerturbationSpec {
  std::optional<int64_t> rotation_override;
  std::optional<int64_t> rotation_delta;
  std::optional<int64_t> width_override;
  std::optional<int64_t> height_override;
  std::optional<int64_t> format_override;

  bool empty() const;
  // Throws std::invalid_argument: both rotation fields set, a value outside
  // int32, or a non-positive width/height.
  void Validate() const;
};

enum class PatchKind {
  kRotationConst,      // rewrite the literal of the const feeding the field
  kRotationStore,      // set or adjust the value right before the field store
  kDimConstForGetter,  // replace getWidth()/getHeight() and its move-result
  kDimConst,           // rewrite the literal of a constant dimension
  kFormatConst,
};

std::string_view PatchKindName(PatchKind kind);

// Replaces original_lines.size() lines starting at |line_index|.
struct Patch {
  std::string path;  // relative to the tree root
  std::string class_name;
  std::string method_signature;
  size_t instruction_index = 0;
  size_t line_index = 0;
  std::vector<std::string> original_lines;
  std::vector<std::string> replacement_lines;
  PatchKind kind = PatchKind::kRotationConst;

  bool operator==(const Patch&) const = default;
};

using locate::LocatedMatch;

struct PlannedMatch {
  std::string path;
  std::string class_name;
  std::string method_signature;
  locate::Strategy strategy = locate::Strategy::kBufferImage;
  size_t patches = 0;
  std::string skip_reason;  // nonempty when nothing could be planned

  bool skipped() const { return !skip_reason.empty(); }
};

inline constexpr std::string_view kMarkerField = "dlprep$injected";
// Declaration inserted once into every patched class.
std::string MarkerDeclaration();

struct InjectionPlan {
  PerturbationSpec spec;
  std::vector<PlannedMatch> matches;
  std::vector<Patch> patches;  // by path, then descending line
  std::vector<std::string> warnings;

  std::vector<std::string> PatchedPaths() const;  // sorted, distinct
};

// Rotation after a delta, always in [0, 360).
int64_t RotateDegrees(int64_t current, int64_t delta);

// Deterministic for a given match list and spec. Matches with no site for
// any requested perturbation are listed as skipped.
InjectionPlan Plan(std::span<const LocatedMatch> matches, const PerturbationSpec& spec);

}  // namespace dlprep::inject

#endif  // DLPREP_INJECT_PLAN_H_
