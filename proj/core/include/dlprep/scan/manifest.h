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

#ifndef DLPREP_SCAN_MANIFEST_H_
#define DLPREP_SCAN_MANIFEST_H_

#include <string>
#include <string_view>
#include <vector>

namespace dlprep::scan {

enum class ServiceKind {
  kFaceDetection,
  kSelfieSegmentation,
  kBarcode,
  kPose,
  kObjectDetection,
  kOther,
};

struct MlkitService {
  ServiceKind kind = ServiceKind::kOther;
  std::string registrar;  // e.g. "com.google.mlkit.vision.face.internal.FaceRegistrar"

  // "face_detection", ..., or "other(<registrar>)".
  std::string Name() const;
  bool operator==(const MlkitService&) const = default;
};

ServiceKind ClassifyRegistrar(std::string_view registrar);

// One service per distinct MLKit vision registrar named in the decoded
// manifest text, in order of first appearance. Malformed XML yields an empty
// list and a message in |warnings|.
std::vector<MlkitService> ExtractServices(std::string_view manifest_text,
                                          std::vector<std::string>* warnings = nullptr);

// True for Android's compiled binary XML (what an undecoded APK carries).
bool IsBinaryXml(std::string_view bytes);

}  // namespace dlprep::scan

#endif  // DLPREP_SCAN_MANIFEST_H_
