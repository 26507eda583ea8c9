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

#include "dlprep/inject/apply.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>

#include "dlprep/smali/emitter.h"
#include "dlprep/smali/parser.h"
#include "dlprep/smali/tree.h"

namespace dlprep::inject {

namespace fs = std::filesystem;
using smali::LineEdit;
using smali::SmaliUnit;

namespace {

struct FileEdits {
  std::string path;
  SmaliUnit unit;
  std::vector<LineEdit> edits;  // ascending
  std::vector<size_t> patch_indices;
};

std::vector<FileEdits> CollectEdits(const InjectionPlan& plan, const fs::path& tree) {
  std::vector<FileEdits> files;
  for (size_t i = 0; i < plan.patches.size(); ++i) {
    const Patch& p = plan.patches[i];
    if (files.empty() || files.back().path != p.path) {
      FileEdits f;
      f.path = p.path;
      try {
        f.unit = smali::ParseUnit(smali::ReadFileBytes(tree / p.path));
      } catch (const std::exception& e) {
        throw ApplyError(ApplyError::Code::kStaleTree, p.path + ": " + e.what());
      }
      files.push_back(std::move(f));
    }
    FileEdits& f = files.back();
    bool matches = p.line_index + p.original_lines.size() <= f.unit.lines.size();
    for (size_t k = 0; matches && k < p.original_lines.size(); ++k)
      matches = f.unit.lines[p.line_index + k].text == p.original_lines[k];
    if (!matches)
      throw ApplyError(ApplyError::Code::kStaleTree,
                       p.path + ": line " + std::to_string(p.line_index + 1) +
                           " changed since the plan was made");
    f.edits.push_back({p.line_index, p.original_lines.size(), p.replacement_lines});
    f.patch_indices.push_back(i);
  }
  for (auto& f : files) {
    f.edits.push_back({f.unit.field_insert_after + 1, 0, {MarkerDeclaration()}});
    std::sort(f.edits.begin(), f.edits.end(), [](const LineEdit& a, const LineEdit& b) {
      if (a.first_line != b.first_line) return a.first_line < b.first_line;
      return a.line_count < b.line_count;
    });
  }
  return files;
}

void WriteFile(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw ApplyError(ApplyError::Code::kIo, "cannot write " + path.string());
}

// Exclusive advisory lock on a file beside the tree, held for the lifetime
// of the object.
class TreeLock {
 public:
  explicit TreeLock(const fs::path& tree) {
    fs::path lock = tree.parent_path() / ("." + tree.filename().string() + ".dlprep.lock");
    fd_ = open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw ApplyError(ApplyError::Code::kIo, "cannot open lock file " + lock.string());
    if (flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      close(fd_);
      throw ApplyError(ApplyError::Code::kLocked, tree.string() + " is locked by another apply");
    }
  }
  ~TreeLock() {
    flock(fd_, LOCK_UN);
    close(fd_);
  }
  TreeLock(const TreeLock&) = delete;
  TreeLock& operator=(const TreeLock&) = delete;

 private:
  int fd_ = -1;
};

fs::path Sibling(const fs::path& tree, const std::string& tag) {
  return tree.parent_path() /
         ("." + tree.filename().string() + ".dlprep-" + tag + "-" + std::to_string(getpid()));
}

}  // namespace

std::vector<std::string> FindMarkedFiles(const fs::path& tree) {
  const std::string needle = std::string(kMarkerField) + ":";
  std::vector<std::string> marked;
  for (const auto& rel : smali::ListSmaliFiles(tree)) {
    std::string text = smali::ReadFileBytes(tree / rel);
    size_t at = 0;
    while ((at = text.find(needle, at)) != std::string::npos) {
      size_t bol = text.rfind('\n', at);
      bol = bol == std::string::npos ? 0 : bol + 1;
      if (text.compare(bol, 6, ".field") == 0) {
        marked.push_back(rel);
        break;
      }
      at += needle.size();
    }
  }
  return marked;
}

std::map<std::string, std::string> RenderPatchedFiles(const InjectionPlan& plan,
                                                      const fs::path& tree) {
  std::map<std::string, std::string> out;
  for (auto& f : CollectEdits(plan, tree))
    out[f.path] = smali::EmitUnit(smali::ApplyLineEdits(f.unit, f.edits));
  return out;
}

PatchReport Apply(const InjectionPlan& plan, const fs::path& tree_in) {
  fs::path tree = fs::absolute(tree_in).lexically_normal();
  if (tree.filename().empty()) tree = tree.parent_path();
  if (!fs::is_directory(tree))
    throw ApplyError(ApplyError::Code::kIo, tree.string() + " is not a directory");
  TreeLock lock(tree);

  auto marked = FindMarkedFiles(tree);
  if (!marked.empty())
    throw ApplyError(ApplyError::Code::kAlreadyInjected,
                     "tree already injected (marker in " + marked.front() + ")");

  auto rendered = RenderPatchedFiles(plan, tree);
  PatchReport report;
  for (const auto& p : plan.patches) report.outcomes.push_back({p.path, p.line_index, p.kind, true});
  if (rendered.empty()) return report;

  fs::path stage = Sibling(tree, "stage");
  fs::path old = Sibling(tree, "old");
  std::error_code ec;
  fs::remove_all(stage, ec);
  fs::remove_all(old, ec);
  try {
    fs::copy(tree, stage, fs::copy_options::recursive | fs::copy_options::copy_symlinks);
    for (const auto& [path, bytes] : rendered) {
      WriteFile(stage / path, bytes);
      report.files_written.push_back(path);
    }
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(stage, ec);
    throw ApplyError(ApplyError::Code::kIo, e.what());
  } catch (...) {
    fs::remove_all(stage, ec);
    throw;
  }

  fs::rename(tree, old, ec);
  if (ec) {
    fs::remove_all(stage, ec);
    throw ApplyError(ApplyError::Code::kIo, "cannot move " + tree.string() + " aside");
  }
  fs::rename(stage, tree, ec);
  if (ec) {
    std::error_code restore;
    fs::rename(old, tree, restore);
    fs::remove_all(stage, restore);
    throw ApplyError(ApplyError::Code::kIo, "cannot swap in patched tree: " + ec.message());
  }
  fs::remove_all(old, ec);
  return report;
}

std::string UnifiedDiff(const InjectionPlan& plan, const fs::path& tree) {
  constexpr size_t kContext = 3;
  std::string out;
  for (const auto& f : CollectEdits(plan, tree)) {
    const auto& lines = f.unit.lines;
    out += "--- a/" + f.path + "\n+++ b/" + f.path + "\n";
    long offset = 0;  // new-file line shift from earlier hunks
    size_t i = 0;
    while (i < f.edits.size()) {
      size_t j = i;
      while (j + 1 < f.edits.size() &&
             f.edits[j + 1].first_line <=
                 f.edits[j].first_line + f.edits[j].line_count + 2 * kContext)
        ++j;
      size_t start = f.edits[i].first_line > kContext ? f.edits[i].first_line - kContext : 0;
      size_t end = std::min(lines.size(),
                            f.edits[j].first_line + f.edits[j].line_count + kContext);
      std::string body;
      size_t old_len = 0, new_len = 0;
      size_t at = start;
      for (size_t k = i; k <= j; ++k) {
        const LineEdit& e = f.edits[k];
        for (; at < e.first_line; ++at, ++old_len, ++new_len) body += " " + lines[at].text + "\n";
        for (size_t n = 0; n < e.line_count; ++n, ++at, ++old_len)
          body += "-" + lines[at].text + "\n";
        for (const auto& r : e.replacement) {
          body += "+" + r + "\n";
          ++new_len;
        }
      }
      for (; at < end; ++at, ++old_len, ++new_len) body += " " + lines[at].text + "\n";
      out += "@@ -" + std::to_string(start + 1) + "," + std::to_string(old_len) + " +" +
             std::to_string(static_cast<long>(start) + 1 + offset) + "," +
             std::to_string(new_len) + " @@\n" + body;
      offset += static_cast<long>(new_len) - static_cast<long>(old_len);
      i = j + 1;
    }
  }
  return out;
}

}  // namespace dlprep::inject
