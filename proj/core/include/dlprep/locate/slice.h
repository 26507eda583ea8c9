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

#ifndef DLPREP_LOCATE_SLICE_H_
#define DLPREP_LOCATE_SLICE_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dlprep/smali/ast.h"
#include "dlprep/smali/tree.h"

namespace dlprep::locate {

struct AnchorOptions {
  std::set<std::string> inference_names = {"process", "run", "predict", "detect"};
  // Only invokes on these owner prefixes count as inference calls.
  std::vector<std::string> owner_prefixes = {"Lcom/google/mlkit/",
                                             "Lorg/tensorflow/lite/"};
};

// An inference call whose input argument is to be traced backwards.
struct SliceAnchor {
  std::string class_name;
  size_t method_index = 0;
  std::string method_signature;
  size_t call_site = 0;  // instruction index of the invoke
  size_t line_index = 0;
  smali::Register traced_register;
  std::string callee;  // "Lowner;->name(...)R"
};

// One anchor per matching invoke, in method then instruction order.
std::vector<SliceAnchor> FindAnchors(const smali::SmaliUnit& unit,
                                     const AnchorOptions& options = {});

enum class CreationApi {
  kCreateBitmap,
  kCreateScaledBitmap,
  kDecodeResource,
  kOtherFactory,
};

std::string_view CreationApiName(CreationApi api);

struct CreationSite {
  std::string class_name;
  std::string method_signature;
  size_t instruction_index = 0;  // the factory invoke
  size_t line_index = 0;
  CreationApi api = CreationApi::kOtherFactory;
  std::string callee;

  bool operator==(const CreationSite&) const = default;
};

// A register whose definition the slice could not follow.
struct SliceGap {
  std::string class_name;
  std::string method_signature;
  size_t instruction_index = 0;
  std::string register_name;
  std::string reason;

  bool operator==(const SliceGap&) const = default;
};

struct SliceResult {
  std::vector<CreationSite> sites;  // discovery order, deduplicated
  std::vector<SliceGap> gaps;
};

// Walks reaching definitions backwards from the anchor's traced register
// until bitmap-creation calls are found. |call_depth| bounds how many static
// factory calls (resolved in |tree|) the walk may descend into.
SliceResult BackwardSlice(const smali::SmaliTree& tree,
                          const smali::SmaliUnit& unit,
                          const SliceAnchor& anchor, int call_depth = 1);

}  // namespace dlprep::locate

#endif  // DLPREP_LOCATE_SLICE_H_
