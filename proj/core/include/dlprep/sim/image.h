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

#ifndef DLPREP_SIM_IMAGE_H_
#define DLPREP_SIM_IMAGE_H_

#include <cstdint>
#include <vector>

namespace dlprep::sim {

// Row-major RGB, three bytes per pixel.
class ImageBuf {
 public:
  ImageBuf() = default;
  // Throws std::invalid_argument for non-positive dimensions.
  ImageBuf(int width, int height);
  ImageBuf(int width, int height, std::vector<uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<uint8_t>& pixels() const { return pixels_; }

  uint8_t at(int x, int y, int c) const { return pixels_[Offset(x, y) + c]; }
  uint8_t& at(int x, int y, int c) { return pixels_[Offset(x, y) + c]; }
  void Set(int x, int y, uint8_t r, uint8_t g, uint8_t b);

  bool operator==(const ImageBuf&) const = default;

 private:
  size_t Offset(int x, int y) const {
    return (static_cast<size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> pixels_;
};

struct SizePair {
  int width = 0;
  int height = 0;

  int64_t area() const { return int64_t{width} * height; }
  bool operator==(const SizePair&) const = default;
};

// Model input: three floats per pixel, row-major.
struct Tensor {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  float at(int x, int y, int c) const {
    return values[(static_cast<size_t>(y) * width + x) * 3 + c];
  }
  bool operator==(const Tensor&) const = default;
};

}  // namespace dlprep::sim

#endif  // DLPREP_SIM_IMAGE_H_
