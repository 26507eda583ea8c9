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

#include "dlprep/sim/detector.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>

namespace dlprep::sim {

const Pattern& UprightPattern() {
  static const Pattern pattern = [] {
    constexpr std::string_view kRows[] = {
        "11111110", "11111110", "11000000", "11111100",
        "11111100", "11000000", "11000000", "11000000",
    };
    Pattern p;
    p.size = 8;
    for (auto row : kRows)
      for (char c : row) p.cells.push_back(c == '1' ? 1.0f : 0.0f);
    return p;
  }();
  return pattern;
}

TemplateDetector::TemplateDetector(Pattern pattern, double threshold)
    : pattern_(std::move(pattern)), threshold_(threshold) {
  if (pattern_.size <= 0 || pattern_.size > kGridHeight ||
      pattern_.cells.size() != static_cast<size_t>(pattern_.size) * pattern_.size)
    throw std::invalid_argument("template must be square and fit the detector grid");
  double sum = 0;
  for (float v : pattern_.cells) sum += v;
  pattern_mean_ = sum / pattern_.cells.size();
  double ss = 0;
  for (float v : pattern_.cells) ss += (v - pattern_mean_) * (v - pattern_mean_);
  pattern_norm_ = std::sqrt(ss);
  if (pattern_norm_ == 0) throw std::invalid_argument("template is flat");
}

std::vector<double> TemplateDetector::Grid(const Tensor& input, OpCounter* ops) const {
  std::vector<double> grid(kGridWidth * kGridHeight, 0.0);
  const int64_t w = input.width, h = input.height;
  for (int gy = 0; gy < kGridHeight; ++gy) {
    int y0 = static_cast<int>(gy * h / kGridHeight);
    int y1 = std::max(y0 + 1, static_cast<int>((gy + 1) * h / kGridHeight));
    for (int gx = 0; gx < kGridWidth; ++gx) {
      int x0 = static_cast<int>(gx * w / kGridWidth);
      int x1 = std::max(x0 + 1, static_cast<int>((gx + 1) * w / kGridWidth));
      double sum = 0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
          sum += input.at(x, y, 0) + input.at(x, y, 1) + input.at(x, y, 2);
      grid[gy * kGridWidth + gx] = sum / (3.0 * (y1 - y0) * (x1 - x0));
      if (ops) *ops += static_cast<uint64_t>(y1 - y0) * (x1 - x0);
    }
  }
  return grid;
}

Detection TemplateDetector::Detect(const Tensor& input, OpCounter* ops) const {
  std::vector<double> grid = Grid(input, ops);
  const int n = pattern_.size;
  Detection best;
  for (int oy = 0; oy + n <= kGridHeight; ++oy) {
    for (int ox = 0; ox + n <= kGridWidth; ++ox) {
      double mean = 0;
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) mean += grid[(oy + y) * kGridWidth + ox + x];
      mean /= n * n;
      double cross = 0, ss = 0;
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          double d = grid[(oy + y) * kGridWidth + ox + x] - mean;
          cross += d * (pattern_.at(x, y) - pattern_mean_);
          ss += d * d;
        }
      }
      double score = ss > 0 ? cross / (std::sqrt(ss) * pattern_norm_) : 0.0;
      if (score > best.score) {
        best.score = score;
        best.x = ox;
        best.y = oy;
      }
    }
  }
  if (ops)
    *ops += static_cast<uint64_t>(kGridWidth - n + 1) * (kGridHeight - n + 1) * n * n;
  best.detected = best.score >= threshold_;
  return best;
}

}  // namespace dlprep::sim
