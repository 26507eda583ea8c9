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

#ifndef DLPREP_SCAN_SCANNER_H_
#define DLPREP_SCAN_SCANNER_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dlprep/scan/manifest.h"

namespace dlprep::scan {

struct ScanOptions {
  std::vector<std::string> suffixes = {".tflite", ".tfl", ".lite"};
  std::vector<std::string> api_prefixes = {"Lorg/tensorflow/lite/", "Lcom/google/mlkit/"};
};

enum class VerdictCategory { kDl, kNonDl, kUnscannable };

std::string_view CategoryName(VerdictCategory c);  // "dl", "non_dl", "unscannable"

struct ModelFileHit {
  std::string path;
  std::string suffix;
  bool operator==(const ModelFileHit&) const = default;
};

struct ApiRefHit {
  std::string file;    // smali file or dex entry
  std::string prefix;  // descriptor prefix that occurred in it
  bool operator==(const ApiRefHit&) const = default;
};

struct DlVerdict {
  std::string app;  // path as given
  VerdictCategory category = VerdictCategory::kNonDl;
  bool is_dl_app = false;
  std::vector<ModelFileHit> model_files;
  std::vector<ApiRefHit> tflite_api_refs;
  std::vector<MlkitService> mlkit_services;
  std::vector<std::string> reasons;   // evidence, in the order it was found
  std::vector<std::string> warnings;
  std::string error;  // why the app is unscannable

  // App classes whose simple name is at most two characters, a hint that a
  // shrinker renamed them, out of all smali classes seen.
  size_t short_class_names = 0;
  size_t smali_classes = 0;

  // Uses MLKit: a registrar in the manifest or an MLKit descriptor in code.
  bool UsesMlkit() const;
};

// Suffix of |suffixes| that the final path component ends with, compared
// case-insensitively; empty when none does.
std::string MatchModelSuffix(std::string_view path, const std::vector<std::string>& suffixes);

// Scans an APK (or any ZIP) held in memory. Smali entries and classes*.dex
// string data are searched for API descriptors. A corrupt archive, or one
// whose code cannot be read and that shows no other evidence, is
// kUnscannable.
DlVerdict ScanArchive(std::string_view bytes, std::string app_name,
                      const ScanOptions& options = {});

// Scans a directory produced by a disassembler (manifest at the root, smali
// under smali*/) or an archive file, chosen by what |path| is.
DlVerdict ScanPath(const std::filesystem::path& path, const ScanOptions& options = {});

}  // namespace dlprep::scan

#endif  // DLPREP_SCAN_SCANNER_H_
