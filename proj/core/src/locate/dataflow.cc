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

#include "dlprep/locate/dataflow.h"

#include <algorithm>
#include <array>
#include <deque>
#include <string_view>

namespace dlprep::locate {

using smali::Instruction;
using smali::OpFamily;

std::vector<smali::Register> ExpandRegisters(const smali::RegisterList& list) {
  if (!list.is_range || list.registers.size() != 2) return list.registers;
  std::vector<smali::Register> out;
  for (uint32_t n = list.registers[0].number; n <= list.registers[1].number; ++n)
    out.push_back({list.registers[0].kind, n});
  return out;
}

namespace {

bool WritesWide(std::string_view op) {
  if (op.starts_with("cmp")) return false;
  size_t to = op.find("-to-");
  if (to != std::string_view::npos) {
    std::string_view target = op.substr(to + 4);
    return target == "long" || target == "double";
  }
  return op.find("-wide") != std::string_view::npos ||
         op.find("-long") != std::string_view::npos ||
         op.find("-double") != std::string_view::npos;
}

bool OtherOpcodeWritesFirstRegister(std::string_view op) {
  static constexpr std::array<std::string_view, 9> kNoDefPrefixes = {
      "nop",          "monitor-",     "fill-array-data", "filled-new-array",
      "aput",         "invoke-",      "return",          "throw",
      "check-cast"};
  for (auto p : kNoDefPrefixes)
    if (op.starts_with(p)) return false;
  return true;
}

}  // namespace

MethodFlow::MethodFlow(const smali::SmaliMethod& method) : method_(&method) {
  const auto& insns = method.instructions;
  size_t n = insns.size();
  defs_.resize(n);
  preds_.resize(n);
  succs_.resize(n);

  for (size_t i = 0; i < n; ++i) {
    const Instruction& insn = insns[i];
    const smali::Register* dest = nullptr;
    switch (insn.family) {
      case OpFamily::kConst:
      case OpFamily::kConstString:
      case OpFamily::kConstClass:
      case OpFamily::kMove:
      case OpFamily::kMoveResult:
      case OpFamily::kMoveException:
      case OpFamily::kInstanceGet:
      case OpFamily::kStaticGet:
      case OpFamily::kNewInstance:
      case OpFamily::kCheckCast:
        dest = insn.RegisterAt(0);
        break;
      case OpFamily::kOther:
        if (OtherOpcodeWritesFirstRegister(insn.opcode)) dest = insn.RegisterAt(0);
        break;
      default:
        break;
    }
    if (dest) {
      uint32_t flat = Flat(*dest);
      defs_[i].push_back(flat);
      if (WritesWide(insn.opcode)) defs_[i].push_back(flat + 1);
    }
  }

  auto label_target = [&](const std::string& name) -> std::optional<size_t> {
    auto it = method.labels.find(name);
    if (it == method.labels.end() || it->second >= n) return std::nullopt;
    return it->second;
  };
  auto add_edge = [&](size_t from, std::optional<size_t> to) {
    if (!to) return;
    auto& s = succs_[from];
    if (std::find(s.begin(), s.end(), *to) == s.end()) {
      s.push_back(*to);
      preds_[*to].push_back(from);
    }
  };

  for (size_t i = 0; i < n; ++i) {
    const Instruction& insn = insns[i];
    std::optional<size_t> next = i + 1 < n ? std::optional<size_t>(i + 1) : std::nullopt;
    switch (insn.family) {
      case OpFamily::kGoto:
        if (const auto* l = std::get_if<smali::LabelRef>(&insn.operands[0]))
          add_edge(i, label_target(l->name));
        break;
      case OpFamily::kIf: {
        add_edge(i, next);
        const auto* l = std::get_if<smali::LabelRef>(&insn.operands.back());
        if (l) add_edge(i, label_target(l->name));
        break;
      }
      case OpFamily::kSwitch: {
        add_edge(i, next);
        const auto* l = std::get_if<smali::LabelRef>(&insn.operands.back());
        if (l) {
          auto it = method.switch_targets.find(l->name);
          if (it != method.switch_targets.end())
            for (const auto& t : it->second) add_edge(i, label_target(t));
        }
        break;
      }
      case OpFamily::kReturn:
      case OpFamily::kThrow:
        break;
      default:
        add_edge(i, next);
        break;
    }
  }

  for (const auto& c : method.catches) {
    auto start = method.labels.find(c.start_label);
    auto end = method.labels.find(c.end_label);
    auto handler = label_target(c.handler_label);
    if (start == method.labels.end() || end == method.labels.end() || !handler)
      continue;
    for (size_t i = start->second; i < end->second && i < n; ++i) add_edge(i, handler);
  }

  for (auto& p : preds_) std::sort(p.begin(), p.end());
}

std::vector<size_t> MethodFlow::ReachingDefs(size_t index, uint32_t reg) const {
  std::vector<size_t> found;
  bool reaches_entry = false;
  std::vector<bool> visited(defs_.size() + 1, false);
  std::deque<size_t> work{index};
  while (!work.empty()) {
    size_t point = work.front();
    work.pop_front();
    if (point < visited.size() && visited[point]) continue;
    if (point < visited.size()) visited[point] = true;
    if (point == 0) reaches_entry = true;
    if (point >= preds_.size()) continue;
    for (size_t q : preds_[point]) {
      const auto& d = defs_[q];
      if (std::find(d.begin(), d.end(), reg) != d.end()) {
        if (std::find(found.begin(), found.end(), q) == found.end()) found.push_back(q);
      } else {
        work.push_back(q);
      }
    }
  }
  std::sort(found.begin(), found.end());
  if (reaches_entry) found.push_back(kEntry);
  return found;
}

}  // namespace dlprep::locate
