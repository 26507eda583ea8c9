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

#include "dlprep/scan/stats.h"

#include <map>
#include <set>

namespace dlprep::scan {

Percent Percent::Of(uint64_t count, uint64_t total) {
  if (total == 0) return {};
  return {static_cast<int64_t>((count * 20000 + total) / (2 * total))};
}

std::string Percent::ToString() const {
  int64_t abs = hundredths < 0 ? -hundredths : hundredths;
  std::string frac = std::to_string(abs % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return (hundredths < 0 ? "-" : "") + std::to_string(abs / 100) + "." + frac;
}

CorpusStats Aggregate(std::span<const DlVerdict> verdicts) {
  CorpusStats s;
  std::map<std::string, size_t> per_service;
  for (const auto& v : verdicts) {
    ++s.total_apps;
    switch (v.category) {
      case VerdictCategory::kUnscannable:
        ++s.unscannable_apps;
        continue;
      case VerdictCategory::kNonDl:
        ++s.non_dl_apps;
        continue;
      case VerdictCategory::kDl:
        ++s.dl_apps;
        break;
    }
    if (!v.UsesMlkit()) continue;
    ++s.mlkit_dl_apps;
    std::set<std::string> kinds;
    for (const auto& service : v.mlkit_services) kinds.insert(service.Name());
    for (const auto& k : kinds) ++per_service[k];
  }
  s.scanned_apps = s.total_apps - s.unscannable_apps;
  s.percentages_defined = s.mlkit_dl_apps > 0;
  for (const auto& [name, count] : per_service)
    s.services.push_back({name, count, Percent::Of(count, s.mlkit_dl_apps)});
  return s;
}

void RecordInjection(CorpusStats* stats, size_t matched_apps, size_t injectable_apps) {
  stats->matched_apps = matched_apps;
  stats->injectable_apps = injectable_apps;
  stats->injectable_percent = Percent::Of(injectable_apps, stats->mlkit_dl_apps);
  stats->injectable_of_matched_percent = Percent::Of(injectable_apps, matched_apps);
}

}  // namespace dlprep::scan
