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

#include "dlprep/smali/tree.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dlprep/smali/parser.h"

namespace dlprep::smali {

namespace fs = std::filesystem;

void SmaliTree::Add(std::string path, SmaliUnit unit) {
  size_t index = units_.size();
  by_class_.try_emplace(unit.class_name, index);
  by_path_.try_emplace(path, index);
  units_.push_back({std::move(path), std::make_shared<const SmaliUnit>(std::move(unit))});
}

const TreeUnit* SmaliTree::FindClass(std::string_view descriptor) const {
  auto it = by_class_.find(descriptor);
  return it == by_class_.end() ? nullptr : &units_[it->second];
}

const TreeUnit* SmaliTree::FindPath(std::string_view path) const {
  auto it = by_path_.find(path);
  return it == by_path_.end() ? nullptr : &units_[it->second];
}

std::string ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> ListSmaliFiles(const fs::path& root) {
  std::vector<std::string> out;
  if (!fs::is_directory(root)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".smali") continue;
    out.push_back(fs::relative(entry.path(), root).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

TreeLoadResult LoadSmaliTree(const fs::path& root) {
  TreeLoadResult result;
  for (const auto& rel : ListSmaliFiles(root)) {
    try {
      result.tree.Add(rel, ParseUnit(ReadFileBytes(root / rel)));
    } catch (const std::exception& e) {
      result.errors.push_back({rel, e.what()});
    }
  }
  return result;
}

}  // namespace dlprep::smali
