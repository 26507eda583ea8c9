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

#ifndef DLPREP_PIPELINE_PIPELINE_H_
#define DLPREP_PIPELINE_PIPELINE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlprep/inject/apply.h"
#include "dlprep/inject/plan.h"
#include "dlprep/locate/locator.h"
#include "dlprep/pipeline/config.h"
#include "dlprep/scan/scanner.h"
#include "dlprep/scan/stats.h"

namespace dlprep::pipeline {

enum class InjectionStatus {
  kNotAttempted,      // not a DL app
  kNoCode,            // no smali tree could be obtained
  kNoMatch,           // no image-wrapper constructor found
  kNoApplicableSite,  // matched, but no site for any requested perturbation
  kNothingToChange,   // every site already holds the requested value
  kPlanned,           // patches planned; nothing written (no output_dir)
  kApplied,
  kFailed,
};

std::string_view InjectionStatusName(InjectionStatus s);

struct AppOutcome {
  std::string app;  // path as given
  std::string name;  // unique per run; names the working tree
  scan::DlVerdict verdict;
  std::string code_source;  // "directory", "embedded_smali", "disassembler"
  std::string work_tree;    // empty unless written under output_dir
  std::vector<std::string> parse_errors;
  locate::LocateReport located;
  inject::InjectionPlan plan;
  std::optional<inject::PatchReport> applied;
  InjectionStatus status = InjectionStatus::kNotAttempted;
  std::string artifact;  // repacked package, when a repack hook ran
  std::string error;
  bool internal_error = false;
  std::vector<std::string> warnings;

  bool matched() const { return !located.matches.empty(); }
  bool injected() const {
    return status == InjectionStatus::kApplied || status == InjectionStatus::kPlanned;
  }
};

struct PipelineReport {
  Config config;
  std::vector<AppOutcome> apps;
  scan::CorpusStats stats;
};

// Each path is an app (archive, or a directory with a manifest or smali
// directories) or a directory of apps, expanded one level in name order.
std::vector<std::string> ExpandInputs(std::span<const std::string> paths);

// Scans every app, then locates and injects into the DL apps. Per-app
// failures are recorded in the outcome. Throws ConfigError when the output
// directory is unusable.
PipelineReport RunPipeline(std::span<const std::string> paths, const Config& config);

// 5 if any app hit an internal error, else 2 if apps were given but none
// matched, else 0.
int ExitCode(const PipelineReport& report);

}  // namespace dlprep::pipeline

#endif  // DLPREP_PIPELINE_PIPELINE_H_
