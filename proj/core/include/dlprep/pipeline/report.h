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

#ifndef DLPREP_PIPELINE_REPORT_H_
#define DLPREP_PIPELINE_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlprep/inject/apply.h"
#include "dlprep/inject/plan.h"
#include "dlprep/locate/locator.h"
#include "dlprep/pipeline/config.h"
#include "dlprep/pipeline/pipeline.h"
#include "dlprep/scan/scanner.h"
#include "dlprep/scan/stats.h"
#include "dlprep/sim/experiment.h"

namespace dlprep::pipeline {

// Every report is a JSON object with "kind", "schema_version" and the
// effective "config". nlohmann's default object type keeps keys sorted, so
// equal inputs serialize to equal bytes. Line numbers are 1-based.

nlohmann::json VerdictToJson(const scan::DlVerdict& v);
nlohmann::json StatsToJson(const scan::CorpusStats& s);
nlohmann::json MatchToJson(const locate::LocatedMatch& m);
nlohmann::json SliceToJson(const locate::AnchorSlice& s);
nlohmann::json PlanToJson(const inject::InjectionPlan& plan);
nlohmann::json SimResultToJson(const sim::SimResult& r, bool include_cases);

nlohmann::json ScanReportJson(std::span<const scan::DlVerdict> verdicts,
                              const scan::CorpusStats& stats, const Config& config);

nlohmann::json LocateReportJson(const std::string& tree, const locate::LocateReport& located,
                                const std::vector<std::string>& parse_errors,
                                const Config& config);

struct InjectSummary {
  std::string tree;
  inject::InjectionPlan plan;
  bool dry_run = false;
  std::optional<inject::PatchReport> applied;
  std::string artifact;
};

nlohmann::json InjectReportJson(const InjectSummary& summary, const Config& config);

// Size sweep for the latency trend: one unperturbed run per candidate size.
struct SweepPoint {
  sim::SizePair target;
  sim::SimResult result;
};

nlohmann::json SimulateReportJson(const sim::ExperimentResult& result,
                                  const inject::PerturbationSpec& spec,
                                  std::span<const SweepPoint> sweep, const Config& config,
                                  bool include_cases);

nlohmann::json PipelineReportJson(const PipelineReport& report);

// Two-space indented with a trailing newline.
std::string DumpReport(const nlohmann::json& report);

// Human-readable table and plot-ready CSV for any report kind. Throw
// std::invalid_argument for an unrecognized report.
std::string RenderTable(const nlohmann::json& report);
std::string RenderCsv(const nlohmann::json& report);

}  // namespace dlprep::pipeline

#endif  // DLPREP_PIPELINE_REPORT_H_
