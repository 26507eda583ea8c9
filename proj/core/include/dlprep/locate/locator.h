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

#ifndef DLPREP_LOCATE_LOCATOR_H_
#define DLPREP_LOCATE_LOCATOR_H_

#include <memory>
#include <string>
#include <vector>

#include "dlprep/locate/matcher.h"
#include "dlprep/locate/slice.h"
#include "dlprep/smali/tree.h"

namespace dlprep::locate {

// A constructor match together with the file it was found in.
struct LocatedMatch {
  std::string path;
  std::shared_ptr<const smali::SmaliUnit> unit;
  ConstructorMatch match;
};

struct AnchorSlice {
  std::string path;
  SliceAnchor anchor;
  SliceResult slice;
};

struct LocateOptions {
  AnchorOptions anchors;
  MatcherOptions matcher;
  int slice_depth = 1;
  size_t workers = 1;
};

struct LocateReport {
  std::vector<AnchorSlice> slices;    // by path, then anchor order
  std::vector<LocatedMatch> matches;  // by path, then method index
};

// Finds inference anchors with their backward slices, and image-wrapper
// constructors, across every class of |tree|.
LocateReport Locate(const smali::SmaliTree& tree, const LocateOptions& options = {});

}  // namespace dlprep::locate

#endif  // DLPREP_LOCATE_LOCATOR_H_
