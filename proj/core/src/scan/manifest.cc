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

#include "dlprep/scan/manifest.h"

#include <algorithm>
#include <array>
#include <regex>
#include <sstream>
#include <utility>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace dlprep::scan {

std::string MlkitService::Name() const {
  switch (kind) {
    case ServiceKind::kFaceDetection: return "face_detection";
    case ServiceKind::kSelfieSegmentation: return "selfie_segmentation";
    case ServiceKind::kBarcode: return "barcode";
    case ServiceKind::kPose: return "pose";
    case ServiceKind::kObjectDetection: return "object_detection";
    case ServiceKind::kOther: break;
  }
  return "other(" + registrar + ")";
}

ServiceKind ClassifyRegistrar(std::string_view registrar) {
  static constexpr std::array<std::pair<std::string_view, ServiceKind>, 6> kTable = {{
      {"FaceRegistrar", ServiceKind::kFaceDetection},
      {"SegmentationRegistrar", ServiceKind::kSelfieSegmentation},
      {"BarcodeRegistrar", ServiceKind::kBarcode},
      {"PoseRegistrar", ServiceKind::kPose},
      {"ObjectsRegistrar", ServiceKind::kObjectDetection},
      {"ObjectDetectorRegistrar", ServiceKind::kObjectDetection},
  }};
  std::string_view simple = registrar.substr(registrar.rfind('.') + 1);
  for (const auto& [suffix, kind] : kTable)
    if (simple.ends_with(suffix)) return kind;
  return ServiceKind::kOther;
}

bool IsBinaryXml(std::string_view bytes) {
  return bytes.size() >= 4 && bytes[0] == '\x03' && bytes[1] == '\0' &&
         bytes[2] == '\x08' && bytes[3] == '\0';
}

std::vector<MlkitService> ExtractServices(std::string_view manifest_text,
                                          std::vector<std::string>* warnings) {
  auto warn = [&](std::string message) {
    if (warnings) warnings->push_back(std::move(message));
  };
  if (IsBinaryXml(manifest_text)) {
    warn("manifest is binary XML; decode it with the disassembler hook first");
    return {};
  }
  try {
    std::istringstream in{std::string(manifest_text)};
    boost::property_tree::ptree tree;
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    warn("malformed manifest XML: " + e.message() + " at line " + std::to_string(e.line()));
    return {};
  }

  static const std::regex kRegistrar(R"(com\.google\.mlkit\.vision\.[A-Za-z0-9_.$]*Registrar)");
  std::vector<MlkitService> services;
  std::string text(manifest_text);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kRegistrar);
       it != std::sregex_iterator(); ++it) {
    MlkitService s{ClassifyRegistrar(it->str()), it->str()};
    if (std::find(services.begin(), services.end(), s) == services.end())
      services.push_back(std::move(s));
  }
  return services;
}

}  // namespace dlprep::scan
