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

#include "dlprep/sim/image.h"

#include <stdexcept>
#include <string>

namespace dlprep::sim {

ImageBuf::ImageBuf(int width, int height)
    : ImageBuf(width, height,
               std::vector<uint8_t>(static_cast<size_t>(width > 0 ? width : 0) *
                                    (height > 0 ? height : 0) * 3)) {}

ImageBuf::ImageBuf(int width, int height, std::vector<uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("image dimensions must be positive: " + std::to_string(width) +
                                "x" + std::to_string(height));
  if (pixels_.size() != static_cast<size_t>(width) * height * 3)
    throw std::invalid_argument("pixel buffer has " + std::to_string(pixels_.size()) +
                                " bytes, expected width*height*3");
}

void ImageBuf::Set(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
  size_t o = Offset(x, y);
  pixels_[o] = r;
  pixels_[o + 1] = g;
  pixels_[o + 2] = b;
}

}  // namespace dlprep::sim
