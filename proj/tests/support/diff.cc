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

#include "support/diff.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

namespace dlprep::testing {

namespace fs = std::filesystem;

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = end + 1;
  }
  return lines;
}

LineDiff DiffLines(std::string_view before, std::string_view after) {
  auto a = SplitLines(before);
  auto b = SplitLines(after);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  LineDiff diff;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(diff.removed));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(),
                      std::back_inserter(diff.added));
  return diff;
}

std::map<std::string, std::string> SnapshotTree(const fs::path& root) {
  std::map<std::string, std::string> files;
  if (!fs::exists(root)) return files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    files[fs::relative(entry.path(), root).generic_string()] = bytes.str();
  }
  return files;
}

TreeDiff DiffTrees(const fs::path& before, const fs::path& after) {
  auto a = SnapshotTree(before);
  auto b = SnapshotTree(after);
  TreeDiff diff;
  for (const auto& [path, bytes] : a) {
    auto it = b.find(path);
    if (it == b.end()) {
      diff.only_before.push_back(path);
      continue;
    }
    if (it->second == bytes) continue;
    diff.files[path] = DiffLines(bytes, it->second);
  }
  for (const auto& [path, bytes] : b)
    if (!a.contains(path)) diff.only_after.push_back(path);
  return diff;
}

}  // namespace dlprep::testing
