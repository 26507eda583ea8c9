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

#ifndef DLPREP_SIM_PREPROCESS_H_
#define DLPREP_SIM_PREPROCESS_H_

#include <cstdint>
#include <span>

#include "dlprep/sim/image.h"

namespace dlprep::sim {

// Candidate with the smallest |w - desired.w| + |h - desired.h|; the first
// one wins ties. Throws std::invalid_argument on an empty list.
SizePair SelectSize(std::span<const SizePair> candidates, SizePair desired);

struct CameraAngles {
  int rotation_degrees = 0;
  int display_angle = 0;

  bool operator==(const CameraAngles&) const = default;
};

// display_rotation is the Surface.ROTATION_* index 0..3; sensor orientation
// must be one of 0, 90, 180, 270 (std::invalid_argument otherwise).
CameraAngles CameraRotation(int display_rotation, int sensor_orientation);

// Pixel operations performed, for the latency proxy. May be null.
using OpCounter = uint64_t;

// Clockwise rotation by |degrees| mod 360. Right angles permute pixels
// exactly; other angles resample nearest-neighbor about the center into a
// canvas of the same size, filling uncovered pixels with black.
ImageBuf Rotate(const ImageBuf& img, int64_t degrees, OpCounter* ops = nullptr);

// Nearest-neighbor: output (x, y) samples (x * W / w, y * H / h).
ImageBuf Resize(const ImageBuf& img, SizePair target, OpCounter* ops = nullptr);

// Rotate, resize, then optionally divide every channel value by 255.
Tensor Preprocess(const ImageBuf& img, int64_t rotation, SizePair target, bool normalize,
                  OpCounter* ops = nullptr);

}  // namespace dlprep::sim

#endif  // DLPREP_SIM_PREPROCESS_H_
