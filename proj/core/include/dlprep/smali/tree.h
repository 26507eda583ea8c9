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

#ifndef DLPREP_SMALI_TREE_H_
#define DLPREP_SMALI_TREE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlprep/smali/ast.h"

namespace dlprep::smali {

struct TreeUnit {
  std::string path;  // relative to the tree root, '/' separated
  std::shared_ptr<const SmaliUnit> unit;
};

struct TreeLoadError {
  std::string path;
  std::string message;
};

// The parsed contents of a disassembled smali directory tree. Units are kept
// in path order; lookups by class descriptor return the first definition.
class SmaliTree {
 public:
  void Add(std::string path, SmaliUnit unit);

  std::span<const TreeUnit> units() const { return units_; }
  const TreeUnit* FindClass(std::string_view descriptor) const;
  const TreeUnit* FindPath(std::string_view path) const;

 private:
  std::vector<TreeUnit> units_;
  std::map<std::string, size_t, std::less<>> by_class_;
  std::map<std::string, size_t, std::less<>> by_path_;
};

struct TreeLoadResult {
  SmaliTree tree;
  std::vector<TreeLoadError> errors;
};

// Lists every *.smali file below |root| as sorted relative paths.
std::vector<std::string> ListSmaliFiles(const std::filesystem::path& root);

// Parses every *.smali file below |root|. Files that fail to parse are
// reported in |errors| and left out of the tree.
TreeLoadResult LoadSmaliTree(const std::filesystem::path& root);

std::string ReadFileBytes(const std::filesystem::path& path);

}  // namespace dlprep::smali

#endif  // DLPREP_SMALI_TREE_H_
