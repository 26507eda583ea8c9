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

#ifndef DLPREP_PIPELINE_CONFIG_H_
#define DLPREP_PIPELINE_CONFIG_H_

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "dlprep/inject/plan.h"
#include "dlprep/locate/locator.h"
#include "dlprep/scan/scanner.h"
#include "dlprep/sim/experiment.h"

namespace dlprep::pipeline {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// External command templates. Placeholders are shell-quoted on expansion.
struct Hooks {
  std::string disassemble;  // {in} archive, {out} directory to create
  std::string deobfuscate;  // {in} smali tree, rewritten in place
  std::string repack;       // {in} smali tree, {out} artifact
};

struct SimulateConfig {
  size_t cases = 200;
  uint64_t seed = 2024;
  sim::SimOptions options;
};

struct Config {
  scan::ScanOptions scan;
  locate::LocateOptions locate;
  inject::PerturbationSpec perturbation = DefaultPerturbation();
  Hooks hooks;
  SimulateConfig simulate;
  std::string output_dir;  // empty: plan only, nothing written
  std::string report_path;
  std::string log_level = "info";
  size_t workers = 1;

  static inject::PerturbationSpec DefaultPerturbation();
};

// Every key is optional; unknown keys and wrong types are errors naming the
// offending key path.
Config ConfigFromJson(const nlohmann::json& j);
Config LoadConfig(const std::filesystem::path& path);

// Full effective configuration, every key present.
nlohmann::json ConfigToJson(const Config& config);

nlohmann::json PerturbationToJson(const inject::PerturbationSpec& spec);

}  // namespace dlprep::pipeline

#endif  // DLPREP_PIPELINE_CONFIG_H_
