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

#include "dlprep/scan/scanner.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <regex>

#include "dlprep/scan/zip.h"
#include "dlprep/smali/tree.h"

namespace dlprep::scan {

namespace fs = std::filesystem;

std::string_view CategoryName(VerdictCategory c) {
  switch (c) {
    case VerdictCategory::kDl: return "dl";
    case VerdictCategory::kNonDl: return "non_dl";
    case VerdictCategory::kUnscannable: return "unscannable";
  }
  return "non_dl";
}

bool DlVerdict::UsesMlkit() const {
  if (!mlkit_services.empty()) return true;
  return std::any_of(tflite_api_refs.begin(), tflite_api_refs.end(),
                     [](const ApiRefHit& h) { return h.prefix.starts_with("Lcom/google/mlkit/"); });
}

std::string MatchModelSuffix(std::string_view path, const std::vector<std::string>& suffixes) {
  std::string_view base = path.substr(path.find_last_of('/') + 1);
  std::string lower(base);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& s : suffixes) {
    std::string ls(s);
    std::transform(ls.begin(), ls.end(), ls.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!ls.empty() && lower.size() > ls.size() && lower.ends_with(ls)) return s;
  }
  return {};
}

namespace {

const std::string kManifest = "AndroidManifest.xml";

bool IsDexEntry(std::string_view name) {
  static const std::regex kDex(R"(classes[0-9]*\.dex)");
  return std::regex_match(name.begin(), name.end(), kDex);
}

std::optional<std::string> ClassDescriptor(std::string_view smali) {
  size_t at = 0;
  while (at < smali.size()) {
    size_t nl = smali.find('\n', at);
    std::string_view line = smali.substr(at, nl == std::string_view::npos ? nl : nl - at);
    if (line.starts_with(".class")) {
      size_t l = line.rfind(' ');
      std::string_view d = line.substr(l + 1);
      while (!d.empty() && (d.back() == '\r' || d.back() == ' ')) d.remove_suffix(1);
      return std::string(d);
    }
    if (nl == std::string_view::npos) break;
    at = nl + 1;
  }
  return std::nullopt;
}

// Walks a sorted list of paths, reading only what the checks need.
class Collector {
 public:
  using ReadFn = std::function<std::string(const std::string&)>;

  Collector(const ScanOptions& options, DlVerdict* verdict) : options_(options), v_(verdict) {}

  void Visit(const std::vector<std::string>& paths, const ReadFn& read) {
    bool saw_code = false;
    for (const auto& path : paths) {
      if (auto suffix = MatchModelSuffix(path, options_.suffixes); !suffix.empty())
        v_->model_files.push_back({path, suffix});
      bool smali = path.ends_with(".smali");
      bool dex = IsDexEntry(path);
      if (smali || dex) {
        saw_code = true;
        std::string bytes;
        try {
          bytes = read(path);
        } catch (const std::exception& e) {
          unreadable_.push_back(e.what());
          continue;
        }
        for (const auto& prefix : options_.api_prefixes)
          if (bytes.find(prefix) != std::string::npos) v_->tflite_api_refs.push_back({path, prefix});
        if (smali) CountClass(bytes);
      }
      if (path == kManifest) {
        std::string bytes;
        try {
          bytes = read(path);
        } catch (const std::exception& e) {
          v_->warnings.push_back(std::string("manifest unreadable: ") + e.what());
          manifest_seen_ = true;
          continue;
        }
        manifest_seen_ = true;
        v_->mlkit_services = ExtractServices(bytes, &v_->warnings);
      }
    }
    if (!manifest_seen_) v_->warnings.push_back("missing AndroidManifest.xml");
    if (!saw_code) v_->warnings.push_back("no smali or dex code found");
  }

  void Finish() {
    for (const auto& m : v_->model_files)
      v_->reasons.push_back("model file " + m.path + " matches " + m.suffix);
    for (const auto& r : v_->tflite_api_refs)
      v_->reasons.push_back("API descriptor " + r.prefix + " in " + r.file);
    for (const auto& s : v_->mlkit_services) v_->reasons.push_back("MLKit service " + s.Name());

    v_->is_dl_app = !v_->model_files.empty() || !v_->tflite_api_refs.empty();
    if (v_->is_dl_app) {
      v_->category = VerdictCategory::kDl;
      for (const auto& u : unreadable_) v_->warnings.push_back("unreadable code: " + u);
    } else if (!unreadable_.empty()) {
      v_->category = VerdictCategory::kUnscannable;
      v_->error = "unreadable code: " + unreadable_.front();
      if (unreadable_.size() > 1)
        v_->error += " (and " + std::to_string(unreadable_.size() - 1) + " more)";
    } else {
      v_->category = VerdictCategory::kNonDl;
    }
  }

 private:
  void CountClass(std::string_view smali) {
    auto d = ClassDescriptor(smali);
    if (!d || d->size() < 3) return;
    ++v_->smali_classes;
    std::string_view body = std::string_view(*d).substr(1, d->size() - 2);
    std::string_view simple = body.substr(body.find_last_of('/') + 1);
    if (simple.size() <= 2) ++v_->short_class_names;
  }

  const ScanOptions& options_;
  DlVerdict* v_;
  std::vector<std::string> unreadable_;
  bool manifest_seen_ = false;
};

}  // namespace

DlVerdict ScanArchive(std::string_view bytes, std::string app_name, const ScanOptions& options) {
  DlVerdict v;
  v.app = std::move(app_name);
  std::optional<ZipReader> zip;
  try {
    zip.emplace(std::string(bytes));
  } catch (const ZipError& e) {
    v.category = VerdictCategory::kUnscannable;
    v.error = std::string("corrupt archive: ") + e.what();
    return v;
  }
  std::vector<std::string> names;
  for (const auto& e : zip->entries())
    if (!e.is_directory()) names.push_back(e.name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  Collector c(options, &v);
  c.Visit(names, [&](const std::string& name) { return zip->Read(*zip->Find(name)); });
  c.Finish();
  return v;
}

DlVerdict ScanPath(const fs::path& path, const ScanOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) {
    std::string bytes;
    try {
      bytes = smali::ReadFileBytes(path);
    } catch (const std::exception& e) {
      DlVerdict v;
      v.app = path.string();
      v.category = VerdictCategory::kUnscannable;
      v.error = e.what();
      return v;
    }
    return ScanArchive(bytes, path.string(), options);
  }

  DlVerdict v;
  v.app = path.string();
  std::vector<std::string> names;
  for (auto it = fs::recursive_directory_iterator(path, ec); !ec && it != fs::end(it);
       it.increment(ec))
    if (it->is_regular_file()) names.push_back(fs::relative(it->path(), path).generic_string());
  std::sort(names.begin(), names.end());
  Collector c(options, &v);
  c.Visit(names, [&](const std::string& name) { return smali::ReadFileBytes(path / name); });
  c.Finish();
  return v;
}

}  // namespace dlprep::scan
