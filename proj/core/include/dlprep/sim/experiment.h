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

#ifndef DLPREP_SIM_EXPERIMENT_H_
#define DLPREP_SIM_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "dlprep/inject/plan.h"
#include "dlprep/sim/detector.h"
#include "dlprep/sim/image.h"

namespace dlprep::sim {

// A frame as the camera delivers it: the upright scene turned so that
// rotating it by the angle the app computes restores it.
struct Capture {
  ImageBuf frame;
  int display_rotation = 0;
  int sensor_orientation = 0;
  int pattern_x = 0;  // scene coordinates of the pattern's top-left corner
  int pattern_y = 0;
};

inline constexpr int kSceneWidth = 160;
inline constexpr int kSceneHeight = 120;

// Deterministic for a given seed; uses raw mt19937_64 outputs only.
std::vector<Capture> GenerateDataset(uint64_t seed, size_t count);

struct SimOptions {
  SizePair desired{640, 320};
  std::vector<SizePair> candidates{{160, 120}, {320, 240}, {640, 480}, {1280, 720}};
  bool normalize = true;
  size_t workers = 1;
};

struct CaseLog {
  size_t index = 0;
  int rotation = 0;  // degrees handed to pre-processing
  SizePair target;
  Detection detection;
  uint64_t ops = 0;

  bool operator==(const CaseLog&) const = default;
};

struct SimResult {
  size_t detected = 0;
  size_t total = 0;
  double detection_rate = 0;
  uint64_t latency_proxy = 0;
  std::vector<CaseLog> cases;

  bool operator==(const SimResult&) const = default;
};

// Runs the app's pre-processing and the detector over |dataset|. Rotation
// and size fields of |spec| act the way an injected constructor would;
// format is ignored.
SimResult RunSim(std::span<const Capture> dataset, const inject::PerturbationSpec& spec,
                 const SimOptions& options = {});

struct ExperimentResult {
  SimResult baseline;
  SimResult perturbed;
};

ExperimentResult RunExperiment(std::span<const Capture> dataset,
                               const inject::PerturbationSpec& spec,
                               const SimOptions& options = {});

}  // namespace dlprep::sim

#endif  // DLPREP_SIM_EXPERIMENT_H_
