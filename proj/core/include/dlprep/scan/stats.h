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

#ifndef DLPREP_SCAN_STATS_H_
#define DLPREP_SCAN_STATS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlprep/scan/scanner.h"

namespace dlprep::scan {

// A percentage held in hundredths, rounded half-up.
struct Percent {
  int64_t hundredths = 0;

  static Percent Of(uint64_t count, uint64_t total);  // 0.00 when total == 0
  double value() const { return static_cast<double>(hundredths) / 100.0; }
  std::string ToString() const;  // "90.32"
  bool operator==(const Percent&) const = default;
};

struct ServiceCount {
  std::string service;  // MlkitService::Name()
  size_t apps = 0;
  Percent percent;  // of MLKit-bearing DL apps
  bool operator==(const ServiceCount&) const = default;
};

struct CorpusStats {
  size_t total_apps = 0;
  size_t unscannable_apps = 0;
  size_t scanned_apps = 0;  // total minus unscannable
  size_t dl_apps = 0;
  size_t non_dl_apps = 0;
  size_t mlkit_dl_apps = 0;
  std::vector<ServiceCount> services;  // by service name
  // False when there are no MLKit apps; percentages then read 0.00.
  bool percentages_defined = false;

  // Filled in by the pipeline once injection has run.
  std::optional<size_t> matched_apps;
  std::optional<size_t> injectable_apps;
  std::optional<Percent> injectable_percent;  // of mlkit_dl_apps
  std::optional<Percent> injectable_of_matched_percent;

  bool operator==(const CorpusStats&) const = default;
};

// Unscannable apps are counted but kept out of every denominator. Services
// overlap, so service percentages may sum past 100.
CorpusStats Aggregate(std::span<const DlVerdict> verdicts);

void RecordInjection(CorpusStats* stats, size_t matched_apps, size_t injectable_apps);

}  // namespace dlprep::scan

#endif  // DLPREP_SCAN_STATS_H_
