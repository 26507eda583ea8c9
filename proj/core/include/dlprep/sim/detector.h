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

#ifndef DLPREP_SIM_DETECTOR_H_
#define DLPREP_SIM_DETECTOR_H_

#include <vector>

#include "dlprep/sim/image.h"
#include "dlprep/sim/preprocess.h"

namespace dlprep::sim {

// Grayscale pattern, row-major, values in [0, 1].
struct Pattern {
  int size = 0;  // square
  std::vector<float> cells;

  float at(int x, int y) const { return cells[static_cast<size_t>(y) * size + x]; }
};

// The upright pattern the bundled detector looks for. It has no rotational
// symmetry, so a quarter or half turn decorrelates it.
const Pattern& UprightPattern();

struct Detection {
  bool detected = false;
  double score = -1;  // best normalized cross-correlation
  int x = 0;          // grid position of the best window
  int y = 0;

  bool operator==(const Detection&) const = default;
};

// Box-averages the input onto a fixed grayscale grid, then slides the
// template over it and reports a hit when the best normalized
// cross-correlation reaches the threshold.
class TemplateDetector {
 public:
  static constexpr int kGridWidth = 32;
  static constexpr int kGridHeight = 24;

  explicit TemplateDetector(Pattern pattern = UprightPattern(), double threshold = 0.8);

  Detection Detect(const Tensor& input, OpCounter* ops = nullptr) const;
  // Grid reduction only; exposed for tests.
  std::vector<double> Grid(const Tensor& input, OpCounter* ops = nullptr) const;

  double threshold() const { return threshold_; }
  const Pattern& pattern() const { return pattern_; }

 private:
  Pattern pattern_;
  double threshold_;
  double pattern_mean_ = 0;
  double pattern_norm_ = 0;
};

}  // namespace dlprep::sim

#endif  // DLPREP_SIM_DETECTOR_H_
