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

#include "dlprep/locate/locator.h"

#include "dlprep/util/parallel.h"

namespace dlprep::locate {

LocateReport Locate(const smali::SmaliTree& tree, const LocateOptions& options) {
  auto units = tree.units();
  std::vector<LocateReport> per_unit(units.size());
  util::ParallelFor(units.size(), options.workers, [&](size_t i) {
    const smali::TreeUnit& tu = units[i];
    LocateReport& r = per_unit[i];
    for (auto& anchor : FindAnchors(*tu.unit, options.anchors)) {
      SliceResult slice = BackwardSlice(tree, *tu.unit, anchor, options.slice_depth);
      r.slices.push_back({tu.path, std::move(anchor), std::move(slice)});
    }
    for (auto& m : MatchConstructors(*tu.unit, options.matcher))
      r.matches.push_back({tu.path, tu.unit, std::move(m)});
  });
  LocateReport report;
  for (auto& r : per_unit) {
    for (auto& s : r.slices) report.slices.push_back(std::move(s));
    for (auto& m : r.matches) report.matches.push_back(std::move(m));
  }
  return report;
}

}  // namespace dlprep::locate
