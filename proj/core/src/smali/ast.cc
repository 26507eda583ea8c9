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

#include "dlprep/smali/ast.h"

#include <array>
#include <utility>

namespace dlprep::smali {

std::string Register::ToString() const {
  return (kind == Kind::kParam ? "p" : "v") + std::to_string(number);
}

std::string FieldRef::ToString() const {
  return owner_class + "->" + field_name + ":" + field_type;
}

std::string MethodRef::Signature() const {
  std::string out = method_name + "(";
  for (const auto& p : param_types) out += p;
  out += ")" + return_type;
  return out;
}

std::string MethodRef::ToString() const {
  return owner_class + "->" + Signature();
}

OpFamily ClassifyOpcode(std::string_view op) {
  auto starts = [&](std::string_view p) { return op.starts_with(p); };
  if (op == "const-string" || op == "const-string/jumbo")
    return OpFamily::kConstString;
  if (op == "const-class") return OpFamily::kConstClass;
  if (op == "const/4" || op == "const/16" || op == "const" ||
      op == "const/high16" || op == "const-wide/16" || op == "const-wide/32" ||
      op == "const-wide" || op == "const-wide/high16")
    return OpFamily::kConst;
  if (starts("move-result")) return OpFamily::kMoveResult;
  if (op == "move-exception") return OpFamily::kMoveException;
  if (op == "move" || op == "move/from16" || op == "move/16" ||
      op == "move-wide" || op == "move-wide/from16" || op == "move-wide/16" ||
      op == "move-object" || op == "move-object/from16" ||
      op == "move-object/16")
    return OpFamily::kMove;
  if (op == "return-void" || op == "return" || op == "return-wide" ||
      op == "return-object" || op == "return-void-no-barrier")
    return OpFamily::kReturn;
  static constexpr std::array<std::string_view, 10> kInvokes = {
      "invoke-virtual",         "invoke-super",        "invoke-direct",
      "invoke-static",          "invoke-interface",    "invoke-virtual/range",
      "invoke-super/range",     "invoke-direct/range", "invoke-static/range",
      "invoke-interface/range"};
  for (auto name : kInvokes)
    if (op == name) return OpFamily::kInvoke;
  static constexpr std::array<std::string_view, 7> kFieldSuffixes = {
      "", "-wide", "-object", "-boolean", "-byte", "-char", "-short"};
  for (auto suffix : kFieldSuffixes) {
    if (op.size() == 4 + suffix.size() && op.substr(4) == suffix) {
      auto head = op.substr(0, 4);
      if (head == "iget") return OpFamily::kInstanceGet;
      if (head == "iput") return OpFamily::kInstancePut;
      if (head == "sget") return OpFamily::kStaticGet;
      if (head == "sput") return OpFamily::kStaticPut;
    }
  }
  if (op == "new-instance") return OpFamily::kNewInstance;
  if (op == "check-cast") return OpFamily::kCheckCast;
  if (op == "goto" || op == "goto/16" || op == "goto/32") return OpFamily::kGoto;
  if (starts("if-")) return OpFamily::kIf;
  if (op == "packed-switch" || op == "sparse-switch") return OpFamily::kSwitch;
  if (op == "throw") return OpFamily::kThrow;
  return OpFamily::kOther;
}

namespace {

template <typename T>
const T* OperandAs(const std::vector<Operand>& ops, size_t i) {
  if (i >= ops.size()) return nullptr;
  return std::get_if<T>(&ops[i]);
}

}  // namespace

const Register* Instruction::RegisterAt(size_t i) const {
  return OperandAs<Register>(operands, i);
}
const Literal* Instruction::LiteralAt(size_t i) const {
  return OperandAs<Literal>(operands, i);
}
const FieldRef* Instruction::FieldAt(size_t i) const {
  return OperandAs<FieldRef>(operands, i);
}
const MethodRef* Instruction::MethodAt(size_t i) const {
  return OperandAs<MethodRef>(operands, i);
}
const RegisterList* Instruction::RegisterListAt(size_t i) const {
  return OperandAs<RegisterList>(operands, i);
}

std::string SmaliMethod::Signature() const {
  std::string out = name + "(";
  for (const auto& p : param_types) out += p;
  out += ")" + return_type;
  return out;
}

uint32_t SmaliMethod::locals() const {
  if (!registers || *registers < param_words) return 0;
  return *registers - param_words;
}

namespace {
constexpr uint32_t kDetachedParamBase = 1u << 16;
}

uint32_t SmaliMethod::FlatIndex(const Register& reg) const {
  if (reg.kind == Register::Kind::kLocal) return reg.number;
  return (registers ? locals() : kDetachedParamBase) + reg.number;
}

std::optional<uint32_t> SmaliMethod::ParamSlot(uint32_t flat) const {
  uint32_t base = registers ? locals() : kDetachedParamBase;
  if (flat < base || flat >= base + param_words) return std::nullopt;
  return flat - base;
}

}  // namespace dlprep::smali
