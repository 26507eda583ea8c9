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

#ifndef DLPREP_LOCATE_DATAFLOW_H_
#define DLPREP_LOCATE_DATAFLOW_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "dlprep/smali/ast.h"

namespace dlprep::locate {

// Control-flow and register def/use facts for one method body. Registers are
// addressed by SmaliMethod::FlatIndex().
class MethodFlow {
 public:
  // Pseudo-definition: the value was live on method entry.
  static constexpr size_t kEntry = std::numeric_limits<size_t>::max();

  explicit MethodFlow(const smali::SmaliMethod& method);

  const smali::SmaliMethod& method() const { return *method_; }

  // Flat registers written by instruction |index| (two for wide results).
  const std::vector<uint32_t>& Defs(size_t index) const { return defs_[index]; }
  const std::vector<size_t>& Predecessors(size_t index) const {
    return preds_[index];
  }
  const std::vector<size_t>& Successors(size_t index) const {
    return succs_[index];
  }

  // Definitions of |reg| reaching the point just before instruction |index|,
  // ascending, with kEntry last when some path from entry leaves |reg|
  // unwritten.
  std::vector<size_t> ReachingDefs(size_t index, uint32_t reg) const;

  uint32_t Flat(const smali::Register& reg) const { return method_->FlatIndex(reg); }

 private:
  const smali::SmaliMethod* method_;
  std::vector<std::vector<uint32_t>> defs_;
  std::vector<std::vector<size_t>> preds_;
  std::vector<std::vector<size_t>> succs_;
};

// Registers named by an invoke operand list, range lists expanded.
std::vector<smali::Register> ExpandRegisters(const smali::RegisterList& list);

}  // namespace dlprep::locate

#endif  // DLPREP_LOCATE_DATAFLOW_H_
