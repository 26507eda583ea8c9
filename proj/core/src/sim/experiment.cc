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

#include "dlprep/sim/experiment.h"

#include <random>
#include <stdexcept>

#include "dlprep/sim/preprocess.h"
#include "dlprep/util/parallel.h"

namespace dlprep::sim {

namespace {

constexpr int kCell = 5;  // scene pixels per detector grid cell
constexpr int64_t kMaxTargetPixels = int64_t{1} << 26;

uint8_t Draw(std::mt19937_64& rng, int lo, int span) {
  return static_cast<uint8_t>(lo + static_cast<int>(rng() % span));
}

}  // namespace

std::vector<Capture> GenerateDataset(uint64_t seed, size_t count) {
  std::mt19937_64 rng(seed);
  const Pattern& pattern = UprightPattern();
  const int extent = pattern.size * kCell;
  std::vector<Capture> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    Capture c;
    c.display_rotation = static_cast<int>(rng() % 4);
    c.sensor_orientation = 90 * static_cast<int>(rng() % 4);
    c.pattern_x = static_cast<int>(rng() % (kSceneWidth - extent + 1));
    c.pattern_y = static_cast<int>(rng() % (kSceneHeight - extent + 1));
    int tint = static_cast<int>(rng() % 40);

    ImageBuf scene(kSceneWidth, kSceneHeight);
    for (int y = 0; y < kSceneHeight; ++y)
      for (int x = 0; x < kSceneWidth; ++x)
        scene.Set(x, y, Draw(rng, 90 + tint, 50), Draw(rng, 90, 50), Draw(rng, 90, 50));
    for (int y = 0; y < extent; ++y) {
      for (int x = 0; x < extent; ++x) {
        bool on = pattern.at(x / kCell, y / kCell) > 0.5f;
        uint8_t v = on ? Draw(rng, 200, 50) : Draw(rng, 15, 40);
        scene.Set(c.pattern_x + x, c.pattern_y + y, v, v, v);
      }
    }
    int rotation = CameraRotation(c.display_rotation, c.sensor_orientation).rotation_degrees;
    c.frame = Rotate(scene, (360 - rotation) % 360);
    out.push_back(std::move(c));
  }
  return out;
}

SimResult RunSim(std::span<const Capture> dataset, const inject::PerturbationSpec& spec,
                 const SimOptions& options) {
  spec.Validate();
  SizePair target = SelectSize(options.candidates, options.desired);
  if (spec.width_override) target.width = static_cast<int>(*spec.width_override);
  if (spec.height_override) target.height = static_cast<int>(*spec.height_override);
  if (target.area() > kMaxTargetPixels)
    throw std::invalid_argument("target size too large to simulate");

  TemplateDetector detector;
  SimResult result;
  result.total = dataset.size();
  result.cases.resize(dataset.size());
  util::ParallelFor(dataset.size(), options.workers, [&](size_t i) {
    const Capture& c = dataset[i];
    int rotation = CameraRotation(c.display_rotation, c.sensor_orientation).rotation_degrees;
    if (spec.rotation_override) rotation = static_cast<int>(*spec.rotation_override);
    else if (spec.rotation_delta) rotation = static_cast<int>(inject::RotateDegrees(rotation, *spec.rotation_delta));
    CaseLog& log = result.cases[i];
    log.index = i;
    log.rotation = rotation;
    log.target = target;
    Tensor t = Preprocess(c.frame, rotation, target, options.normalize, &log.ops);
    log.detection = detector.Detect(t, &log.ops);
  });
  for (const auto& log : result.cases) {
    result.detected += log.detection.detected;
    result.latency_proxy += log.ops;
  }
  result.detection_rate =
      result.total ? static_cast<double>(result.detected) / result.total : 0.0;
  return result;
}

ExperimentResult RunExperiment(std::span<const Capture> dataset,
                               const inject::PerturbationSpec& spec,
                               const SimOptions& options) {
  return {RunSim(dataset, {}, options), RunSim(dataset, spec, options)};
}

}  // namespace dlprep::sim
