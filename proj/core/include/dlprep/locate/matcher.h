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

#ifndef DLPREP_LOCATE_MATCHER_H_
#define DLPREP_LOCATE_MATCHER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlprep/smali/ast.h"

namespace dlprep::locate {

// Constructor signatures of the image wrapper handed to inference. Each is
// keyed on literal values and framework API names, which survive renaming.
//
//   kBufferImage: a current-class field is assigned 842094169 or 17, and the
//                 constructor loads at least one string constant.
//   kBitmapImage: getWidth()I and getHeight()I are invoked on a parameter,
//                 and a current-class field is assigned -1.
//   kMediaImage:  a current-class field is assigned 35, and the constructor
//                 references android.graphics.Matrix.
//
// Strategies are tried in that order; the first that holds wins.
enum class Strategy { kBufferImage, kBitmapImage, kMediaImage };

std::string_view StrategyName(Strategy s);  // "S1_buffer", ...

inline constexpr int64_t kFormatYv12 = 842094169;  // 0x32315659
inline constexpr int64_t kFormatNv21 = 17;
inline constexpr int64_t kFormatBitmap = -1;
inline constexpr int64_t kFormatYuv420 = 35;

enum class DimensionSource { kGetWidth, kGetHeight, kConst };
enum class Axis { kWidth, kHeight };

std::string_view DimensionSourceName(DimensionSource s);

struct RotationSite {
  size_t instruction_index = 0;  // defining const, or the iput for parameters
  std::optional<int64_t> literal;
  bool from_parameter = false;
  size_t store_index = 0;  // the iput into the rotation field
  smali::Register value_register;

  bool operator==(const RotationSite&) const = default;
};

struct DimensionSite {
  size_t instruction_index = 0;  // move-result or defining const
  DimensionSource source = DimensionSource::kConst;
  Axis axis = Axis::kWidth;
  std::optional<size_t> invoke_index;  // getter call for getter sources
  std::optional<int64_t> literal;
  size_t store_index = 0;

  bool operator==(const DimensionSite&) const = default;
};

struct FormatSite {
  size_t instruction_index = 0;
  int64_t literal = 0;
  size_t store_index = 0;

  bool operator==(const FormatSite&) const = default;
};

struct ConstructorMatch {
  Strategy strategy = Strategy::kBufferImage;
  std::string class_name;
  std::string method_signature;
  size_t method_index = 0;
  std::vector<RotationSite> rotation_sites;
  std::vector<DimensionSite> dimension_sites;
  std::optional<FormatSite> format_site;

  bool operator==(const ConstructorMatch&) const = default;
};

struct MatcherOptions {
  bool enable_buffer = true;
  bool enable_bitmap = true;
  bool enable_media = true;
  // When nonempty, the buffer strategy requires one of these exact strings
  // instead of any string constant.
  std::vector<std::string> buffer_string_allowlist;
  std::string matrix_descriptor = "Landroid/graphics/Matrix;";
};

// One match per <init> method that satisfies a strategy, in method order.
std::vector<ConstructorMatch> MatchConstructors(const smali::SmaliUnit& unit,
                                                const MatcherOptions& options = {});

}  // namespace dlprep::locate

#endif  // DLPREP_LOCATE_MATCHER_H_
