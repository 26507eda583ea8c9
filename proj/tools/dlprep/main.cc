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

// dlprep: finds the image pre-processing of Android DL apps and rewrites it.
//
//   dlprep scan <path...>          classify apps as DL / non-DL / unscannable
//   dlprep locate <smali-dir>      find image-wrapper constructors and slices
//   dlprep inject <smali-dir>      patch rotation, size and format sites
//   dlprep simulate                run the perturbation on a synthetic detector
//   dlprep pipeline <path...>      scan, locate and inject a corpus
//   dlprep report <report.json>    render a saved report

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dlprep/inject/apply.h"
#include "dlprep/inject/plan.h"
#include "dlprep/inject/repack.h"
#include "dlprep/locate/locator.h"
#include "dlprep/pipeline/config.h"
#include "dlprep/pipeline/pipeline.h"
#include "dlprep/pipeline/report.h"
#include "dlprep/scan/stats.h"
#include "dlprep/sim/experiment.h"
#include "dlprep/smali/tree.h"

namespace {

namespace fs = std::filesystem;
using dlprep::pipeline::Config;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoMatch = 2;
constexpr int kExitStale = 3;
constexpr int kExitHook = 4;
constexpr int kExitInternal = 5;

struct Common {
  std::string config_path;
  std::string report_path;
  std::string log_level;
  bool to_stdout = false;
  size_t workers = 0;
};

// Perturbation flags shared by inject, simulate and pipeline.
struct PerturbFlags {
  std::optional<int64_t> rotation;
  std::optional<int64_t> rotation_delta;
  std::optional<int64_t> width;
  std::optional<int64_t> height;
  std::optional<int64_t> format;

  void Register(CLI::App* cmd) {
    auto* r = cmd->add_option("--rotation", rotation, "Set the rotation to this value (degrees)");
    auto* d = cmd->add_option("--rotation-delta", rotation_delta,
                              "Add this many degrees to the rotation, modulo 360");
    r->excludes(d);
    cmd->add_option("--width", width, "Override the image width");
    cmd->add_option("--height", height, "Override the image height");
    cmd->add_option("--format", format, "Override the image format constant");
  }

  void ApplyTo(dlprep::inject::PerturbationSpec* spec) const {
    if (rotation) {
      spec->rotation_override = rotation;
      spec->rotation_delta.reset();
    }
    if (rotation_delta) {
      spec->rotation_delta = rotation_delta;
      spec->rotation_override.reset();
    }
    if (width) spec->width_override = width;
    if (height) spec->height_override = height;
    if (format) spec->format_override = format;
    spec->Validate();
  }
};

Config LoadEffectiveConfig(const Common& common) {
  Config config;
  if (!common.config_path.empty()) config = dlprep::pipeline::LoadConfig(common.config_path);
  if (!common.report_path.empty()) config.report_path = common.report_path;
  if (!common.log_level.empty()) config.log_level = common.log_level;
  if (common.workers > 0) {
    config.workers = common.workers;
    config.simulate.options.workers = common.workers;
  }
  return config;
}

void SetUpLogging(const std::string& level) {
  auto logger = spdlog::stderr_color_mt("dlprep");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(level));
}

// Writes |report| where the config and flags ask for it. Without a report
// path or --stdout the table rendering goes to stdout.
void Emit(const nlohmann::json& report, const Config& config, const Common& common) {
  std::string text = dlprep::pipeline::DumpReport(report);
  if (!config.report_path.empty()) {
    std::ofstream out(config.report_path, std::ios::binary);
    if (!(out << text)) throw std::runtime_error("cannot write report " + config.report_path);
    spdlog::info("report written to {}", config.report_path);
  }
  if (common.to_stdout) {
    std::cout << text;
  } else if (config.report_path.empty()) {
    std::cout << dlprep::pipeline::RenderTable(report);
  }
}

int RunScan(const std::vector<std::string>& paths, const std::string& suffixes,
            const Common& common) {
  Config config = LoadEffectiveConfig(common);
  if (!suffixes.empty()) {
    config.scan.suffixes.clear();
    std::stringstream ss(suffixes);
    for (std::string s; std::getline(ss, s, ',');)
      if (!s.empty()) config.scan.suffixes.push_back(s);
  }
  SetUpLogging(config.log_level);
  auto inputs = dlprep::pipeline::ExpandInputs(paths);
  std::vector<dlprep::scan::DlVerdict> verdicts(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    verdicts[i] = dlprep::scan::ScanPath(inputs[i], config.scan);
    spdlog::debug("{}: {}", inputs[i], dlprep::scan::CategoryName(verdicts[i].category));
  }
  auto stats = dlprep::scan::Aggregate(verdicts);
  Emit(dlprep::pipeline::ScanReportJson(verdicts, stats, config), config, common);
  return kExitOk;
}

struct LoadedTree {
  dlprep::smali::TreeLoadResult loaded;
  std::vector<std::string> errors;
};

LoadedTree LoadTree(const std::string& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error(dir + " is not a directory");
  LoadedTree t{dlprep::smali::LoadSmaliTree(dir), {}};
  for (const auto& e : t.loaded.errors) {
    t.errors.push_back(e.path + ": " + e.message);
    spdlog::warn("skipping {}: {}", e.path, e.message);
  }
  return t;
}

int RunLocate(const std::string& dir, std::optional<int> depth, const Common& common) {
  Config config = LoadEffectiveConfig(common);
  if (depth) {
    if (*depth < 0) throw dlprep::pipeline::ConfigError("--depth must be >= 0");
    config.locate.slice_depth = *depth;
  }
  config.locate.workers = config.workers;
  SetUpLogging(config.log_level);
  LoadedTree t = LoadTree(dir);
  auto located = dlprep::locate::Locate(t.loaded.tree, config.locate);
  spdlog::info("{} constructor match(es), {} inference call(s)", located.matches.size(),
               located.slices.size());
  Emit(dlprep::pipeline::LocateReportJson(dir, located, t.errors, config), config, common);
  return located.matches.empty() ? kExitNoMatch : kExitOk;
}

struct InjectFlags {
  PerturbFlags perturb;
  std::string repack_cmd;
  std::string artifact;
  bool dry_run = false;
};

int RunInject(const std::string& dir, const InjectFlags& flags, const Common& common) {
  Config config = LoadEffectiveConfig(common);
  flags.perturb.ApplyTo(&config.perturbation);
  if (!flags.repack_cmd.empty()) config.hooks.repack = flags.repack_cmd;
  config.locate.workers = config.workers;
  SetUpLogging(config.log_level);

  LoadedTree t = LoadTree(dir);
  if (auto marked = dlprep::inject::FindMarkedFiles(dir); !marked.empty()) {
    spdlog::error("tree already injected (marker in {})", marked.front());
    return kExitStale;
  }
  auto located = dlprep::locate::Locate(t.loaded.tree, config.locate);
  if (located.matches.empty()) {
    spdlog::error("no image-wrapper constructor found under {}", dir);
    return kExitNoMatch;
  }
  dlprep::pipeline::InjectSummary summary;
  summary.tree = dir;
  summary.dry_run = flags.dry_run;
  summary.plan = dlprep::inject::Plan(located.matches, config.perturbation);
  for (const auto& w : summary.plan.warnings) spdlog::warn("{}", w);
  if (summary.plan.patches.empty()) spdlog::warn("nothing to patch");

  try {
    if (flags.dry_run) {
      std::cout << dlprep::inject::UnifiedDiff(summary.plan, dir);
      if (!config.report_path.empty()) Emit(InjectReportJson(summary, config), config, {});
      return kExitOk;
    }
    if (!summary.plan.patches.empty()) {
      summary.applied = dlprep::inject::Apply(summary.plan, dir);
      spdlog::info("patched {} file(s)", summary.applied->files_written.size());
    }
  } catch (const dlprep::inject::ApplyError& e) {
    spdlog::error("{}", e.what());
    return e.code() == dlprep::inject::ApplyError::Code::kIo ? kExitInternal : kExitStale;
  }

  int code = kExitOk;
  if (!config.hooks.repack.empty() && summary.applied) {
    fs::path tree = fs::absolute(dir).lexically_normal();
    if (tree.filename().empty()) tree = tree.parent_path();
    fs::path artifact = flags.artifact.empty()
                            ? tree.parent_path() / (tree.filename().string() + "-injected.apk")
                            : fs::path(flags.artifact);
    try {
      summary.artifact = dlprep::inject::Repack(dir, artifact, config.hooks.repack).artifact.string();
      spdlog::info("repacked to {}", summary.artifact);
    } catch (const dlprep::inject::HookError& e) {
      spdlog::error("{}", e.what());
      if (!e.stderr_text().empty()) std::cerr << e.stderr_text();
      code = kExitHook;
    }
  }
  Emit(InjectReportJson(summary, config), config, common);
  return code;
}

struct SimulateFlags {
  PerturbFlags perturb;
  std::optional<size_t> cases;
  std::optional<uint64_t> seed;
  bool include_cases = false;
  bool no_sweep = false;
};

int RunSimulate(const SimulateFlags& flags, const Common& common) {
  Config config = LoadEffectiveConfig(common);
  flags.perturb.ApplyTo(&config.perturbation);
  if (flags.cases) config.simulate.cases = *flags.cases;
  if (flags.seed) config.simulate.seed = *flags.seed;
  SetUpLogging(config.log_level);

  auto dataset = dlprep::sim::GenerateDataset(config.simulate.seed, config.simulate.cases);
  auto result = dlprep::sim::RunExperiment(dataset, config.perturbation, config.simulate.options);
  spdlog::info("detection rate {:.4f} -> {:.4f}", result.baseline.detection_rate,
               result.perturbed.detection_rate);
  std::vector<dlprep::pipeline::SweepPoint> sweep;
  if (!flags.no_sweep) {
    for (const auto& size : config.simulate.options.candidates) {
      dlprep::sim::SimOptions options = config.simulate.options;
      options.candidates = {size};
      sweep.push_back({size, dlprep::sim::RunSim(dataset, {}, options)});
    }
  }
  Emit(dlprep::pipeline::SimulateReportJson(result, config.perturbation, sweep, config,
                                            flags.include_cases),
       config, common);
  return kExitOk;
}

struct PipelineFlags {
  PerturbFlags perturb;
  std::string output_dir;
  std::string disassemble_cmd;
  std::string deobfuscate_cmd;
  std::string repack_cmd;
};

int RunPipelineCommand(const std::vector<std::string>& paths, const PipelineFlags& flags,
                       const Common& common) {
  Config config = LoadEffectiveConfig(common);
  flags.perturb.ApplyTo(&config.perturbation);
  if (!flags.output_dir.empty()) config.output_dir = flags.output_dir;
  if (!flags.disassemble_cmd.empty()) config.hooks.disassemble = flags.disassemble_cmd;
  if (!flags.deobfuscate_cmd.empty()) config.hooks.deobfuscate = flags.deobfuscate_cmd;
  if (!flags.repack_cmd.empty()) config.hooks.repack = flags.repack_cmd;
  SetUpLogging(config.log_level);
  if (config.output_dir.empty()) spdlog::info("no output_dir: planning only");

  auto report = dlprep::pipeline::RunPipeline(paths, config);
  for (const auto& app : report.apps) {
    if (!app.error.empty()) spdlog::warn("{}: {}", app.app, app.error);
    for (const auto& w : app.warnings) spdlog::warn("{}: {}", app.app, w);
    spdlog::debug("{}: {}", app.app, dlprep::pipeline::InjectionStatusName(app.status));
  }
  Emit(dlprep::pipeline::PipelineReportJson(report), config, common);
  return dlprep::pipeline::ExitCode(report);
}

int RunReport(const std::string& path, const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json report = nlohmann::json::parse(in);
  if (format == "json") std::cout << dlprep::pipeline::DumpReport(report);
  else if (format == "csv") std::cout << dlprep::pipeline::RenderCsv(report);
  else std::cout << dlprep::pipeline::RenderTable(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locate and rewrite image pre-processing in Android DL apps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dlprep 0.3.0");

  Common common;
  app.add_option("--config", common.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--report", common.report_path, "Write the JSON report to this file");
  app.add_flag("--stdout", common.to_stdout, "Print the JSON report on stdout");
  app.add_option("--log-level", common.log_level, "trace, debug, info, warn, error, off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));
  app.add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> scan_paths;
  std::string suffixes;
  auto* scan = app.add_subcommand("scan", "Classify apps as DL, non-DL or unscannable");
  scan->add_option("paths", scan_paths, "APKs, app directories or directories of apps")
      ->required();
  scan->add_option("--suffixes", suffixes, "Comma-separated model file suffixes");

  std::string locate_dir;
  std::optional<int> depth;
  auto* locate = app.add_subcommand("locate", "Find image-wrapper constructors and slices");
  locate->add_option("smali-dir", locate_dir, "Disassembled smali tree")->required();
  locate->add_option("--depth", depth, "Static calls the backward slice may enter");

  std::string inject_dir;
  InjectFlags inject_flags;
  auto* inject = app.add_subcommand("inject", "Patch rotation, size and format sites");
  inject->add_option("smali-dir", inject_dir, "Disassembled smali tree")->required();
  inject_flags.perturb.Register(inject);
  inject->add_option("--repack-cmd", inject_flags.repack_cmd,
                     "Assembler command; {in} is the tree and {out} the artifact");
  inject->add_option("--artifact", inject_flags.artifact, "Repacked artifact path");
  inject->add_flag("--dry-run", inject_flags.dry_run, "Print the plan as a unified diff");

  SimulateFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Measure the perturbation on a synthetic detector");
  sim_flags.perturb.Register(simulate);
  simulate->add_option("--cases", sim_flags.cases, "Dataset size");
  simulate->add_option("--seed", sim_flags.seed, "Dataset seed");
  simulate->add_flag("--include-cases", sim_flags.include_cases, "Log every case in the report");
  simulate->add_flag("--no-sweep", sim_flags.no_sweep, "Skip the input-size latency sweep");

  std::vector<std::string> pipeline_paths;
  PipelineFlags pipeline_flags;
  auto* pipeline = app.add_subcommand("pipeline", "Scan, locate and inject a corpus");
  pipeline->add_option("paths", pipeline_paths, "APKs, app directories or directories of apps");
  pipeline_flags.perturb.Register(pipeline);
  pipeline->add_option("--output-dir", pipeline_flags.output_dir, "Where patched trees go");
  pipeline->add_option("--disassemble-cmd", pipeline_flags.disassemble_cmd,
                       "Disassembler command; {in} is the archive and {out} the tree");
  pipeline->add_option("--deobfuscate-cmd", pipeline_flags.deobfuscate_cmd,
                       "Command run on each tree before analysis; {in} is the tree");
  pipeline->add_option("--repack-cmd", pipeline_flags.repack_cmd,
                       "Assembler command; {in} is the tree and {out} the artifact");

  std::string report_file;
  std::string format = "table";
  auto* report = app.add_subcommand("report", "Render a saved JSON report");
  report->add_option("report", report_file, "Report written by another subcommand")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--format", format, "json, table or csv")
      ->check(CLI::IsMember({"json", "table", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*scan) return RunScan(scan_paths, suffixes, common);
    if (*locate) return RunLocate(locate_dir, depth, common);
    if (*inject) return RunInject(inject_dir, inject_flags, common);
    if (*simulate) return RunSimulate(sim_flags, common);
    if (*pipeline) return RunPipelineCommand(pipeline_paths, pipeline_flags, common);
    if (*report) return RunReport(report_file, format);
  } catch (const dlprep::pipeline::ConfigError& e) {
    std::cerr << "dlprep: " << e.what() << "\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dlprep: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "dlprep: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitError;
}
