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

#include "dlprep/sim/preprocess.h"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dlprep::sim {

SizePair SelectSize(std::span<const SizePair> candidates, SizePair desired) {
  if (candidates.empty()) throw std::invalid_argument("no candidate sizes");
  const SizePair* selected = nullptr;
  int64_t min_diff = std::numeric_limits<int64_t>::max();
  for (const auto& c : candidates) {
    int64_t diff = std::llabs(int64_t{c.width} - desired.width) +
                   std::llabs(int64_t{c.height} - desired.height);
    if (diff < min_diff) {
      selected = &c;
      min_diff = diff;
    }
  }
  return *selected;
}

CameraAngles CameraRotation(int display_rotation, int sensor_orientation) {
  if (sensor_orientation != 0 && sensor_orientation != 90 && sensor_orientation != 180 &&
      sensor_orientation != 270)
    throw std::invalid_argument("sensor orientation must be 0, 90, 180 or 270, got " +
                                std::to_string(sensor_orientation));
  int degrees = 0;
  switch (display_rotation) {
    case 0: degrees = 0; break;
    case 1: degrees = 90; break;
    case 2: degrees = 180; break;
    case 3: degrees = 270; break;
    default:
      throw std::invalid_argument("display rotation must be 0..3, got " +
                                  std::to_string(display_rotation));
  }
  CameraAngles out;
  out.rotation_degrees = (sensor_orientation + degrees) % 360;
  out.display_angle = (360 - out.rotation_degrees) % 360;
  return out;
}

namespace {

void Count(OpCounter* ops, uint64_t n) {
  if (ops) *ops += n;
}

void CopyPixel(const ImageBuf& from, int fx, int fy, ImageBuf* to, int tx, int ty) {
  for (int c = 0; c < 3; ++c) to->at(tx, ty, c) = from.at(fx, fy, c);
}

}  // namespace

ImageBuf Rotate(const ImageBuf& img, int64_t degrees, OpCounter* ops) {
  int r = static_cast<int>((degrees % 360 + 360) % 360);
  const int w = img.width(), h = img.height();
  if (r == 0) return img;
  Count(ops, static_cast<uint64_t>(w) * h);
  if (r == 90 || r == 270) {
    ImageBuf out(h, w);
    for (int y = 0; y < w; ++y)
      for (int x = 0; x < h; ++x) {
        if (r == 90) CopyPixel(img, y, h - 1 - x, &out, x, y);
        else CopyPixel(img, w - 1 - y, x, &out, x, y);
      }
    return out;
  }
  ImageBuf out(w, h);
  if (r == 180) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) CopyPixel(img, w - 1 - x, h - 1 - y, &out, x, y);
    return out;
  }
  double theta = r * std::numbers::pi / 180.0;
  double cs = std::cos(theta), sn = std::sin(theta);
  double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double dx = x - cx, dy = y - cy;
      long sx = std::lround(cx + dx * cs + dy * sn);
      long sy = std::lround(cy - dx * sn + dy * cs);
      if (sx >= 0 && sx < w && sy >= 0 && sy < h)
        CopyPixel(img, static_cast<int>(sx), static_cast<int>(sy), &out, x, y);
    }
  }
  return out;
}

ImageBuf Resize(const ImageBuf& img, SizePair target, OpCounter* ops) {
  ImageBuf out(target.width, target.height);
  Count(ops, static_cast<uint64_t>(target.area()));
  const int64_t w = img.width(), h = img.height();
  for (int y = 0; y < target.height; ++y) {
    int sy = static_cast<int>(y * h / target.height);
    for (int x = 0; x < target.width; ++x)
      CopyPixel(img, static_cast<int>(x * w / target.width), sy, &out, x, y);
  }
  return out;
}

Tensor Preprocess(const ImageBuf& img, int64_t rotation, SizePair target, bool normalize,
                  OpCounter* ops) {
  ImageBuf rotated = Rotate(img, rotation, ops);
  ImageBuf resized = Resize(rotated, target, ops);
  Tensor t;
  t.width = resized.width();
  t.height = resized.height();
  t.values.reserve(resized.pixels().size());
  for (uint8_t v : resized.pixels())
    t.values.push_back(normalize ? static_cast<float>(v) / 255.0f : static_cast<float>(v));
  Count(ops, resized.pixels().size());
  return t;
}

}  // namespace dlprep::sim
