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

#ifndef DLPREP_SMALI_AST_H_
#define DLPREP_SMALI_AST_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dlprep::smali {

enum class Radix { kDecimal, kHex };

// An integer literal as written in source. |value| is the signed value
// regardless of spelling, so "0xb4" and "180" compare equal.
struct Literal {
  int64_t value = 0;
  Radix radix = Radix::kHex;
  std::string suffix;  // "", "L", "t" or "s"

  bool operator==(const Literal& other) const { return value == other.value; }
};

struct Register {
  enum class Kind { kLocal, kParam };  // v<n> / p<n>

  Kind kind = Kind::kLocal;
  uint32_t number = 0;

  std::string ToString() const;
  bool operator==(const Register&) const = default;
};

// "{v0, v1}" or "{v0 .. v5}".
struct RegisterList {
  std::vector<Register> registers;  // endpoints only when |is_range|
  bool is_range = false;

  bool operator==(const RegisterList&) const = default;
};

struct FieldRef {
  std::string owner_class;
  std::string field_name;
  std::string field_type;

  std::string ToString() const;
  bool operator==(const FieldRef&) const = default;
};

struct MethodRef {
  std::string owner_class;
  std::string method_name;
  std::vector<std::string> param_types;
  std::string return_type;

  // "name(params)ret", without the owner.
  std::string Signature() const;
  std::string ToString() const;
  bool operator==(const MethodRef&) const = default;
};

// Contents between the quotes, still escaped.
struct StringLiteral {
  std::string escaped;
  bool operator==(const StringLiteral&) const = default;
};

struct TypeRef {
  std::string descriptor;
  bool operator==(const TypeRef&) const = default;
};

struct LabelRef {
  std::string name;  // without the leading ':'
  bool operator==(const LabelRef&) const = default;
};

struct RawOperand {
  std::string text;
  bool operator==(const RawOperand&) const = default;
};

using Operand = std::variant<Register, RegisterList, Literal, FieldRef,
                             MethodRef, StringLiteral, TypeRef, LabelRef,
                             RawOperand>;

// Opcode families the analyses care about. Everything else is kOther and
// passes through with leniently tokenized operands.
enum class OpFamily {
  kConst,
  kConstString,
  kConstClass,
  kMove,
  kMoveResult,
  kMoveException,
  kReturn,
  kInvoke,
  kInstanceGet,
  kInstancePut,
  kStaticGet,
  kStaticPut,
  kNewInstance,
  kCheckCast,
  kGoto,
  kIf,
  kSwitch,
  kThrow,
  kOther,
};

OpFamily ClassifyOpcode(std::string_view opcode);

struct Instruction {
  std::string opcode;
  OpFamily family = OpFamily::kOther;
  std::vector<Operand> operands;
  std::string raw_text;  // verbatim line, no terminator
  size_t line_index = 0;

  // Accessors return nullptr when the operand is absent or of another kind.
  const Register* RegisterAt(size_t i) const;
  const Literal* LiteralAt(size_t i) const;
  const FieldRef* FieldAt(size_t i) const;
  const MethodRef* MethodAt(size_t i) const;
  const RegisterList* RegisterListAt(size_t i) const;
};

struct CatchDirective {
  std::string exception_type;  // empty for .catchall
  std::string start_label;
  std::string end_label;
  std::string handler_label;
  size_t line_index = 0;
};

struct FieldDecl {
  std::vector<std::string> access_flags;
  std::string name;
  std::string type;
  size_t line_index = 0;
};

struct SmaliMethod {
  std::string name;
  std::vector<std::string> access_flags;
  std::vector<std::string> param_types;
  std::string return_type;
  bool is_constructor = false;  // name == "<init>"
  bool is_static = false;

  // Total register count (locals + parameter words) when the body declares
  // .registers or .locals.
  std::optional<uint32_t> registers;
  uint32_t param_words = 0;  // includes the receiver for instance methods

  std::vector<Instruction> instructions;
  // Label name -> index of the instruction that follows it (may equal
  // instructions.size() for a trailing label).
  std::map<std::string, size_t> labels;
  std::vector<CatchDirective> catches;
  // Payload label of a packed/sparse-switch table -> its target labels.
  std::map<std::string, std::vector<std::string>> switch_targets;

  size_t header_line = 0;
  size_t end_line = 0;

  std::string Signature() const;  // "name(params)ret"
  uint32_t locals() const;
  // Maps a register to a flat index where p<n> == v<locals+n>. Without a
  // register directive parameters are offset past every local index.
  uint32_t FlatIndex(const Register& reg) const;
  // Returns the parameter slot index (0 = receiver for instance methods) of
  // a flat register, or nullopt for locals.
  std::optional<uint32_t> ParamSlot(uint32_t flat) const;
};

// Verbatim line plus its terminator ("\n", "\r\n" or "" on the last line).
struct SourceLine {
  std::string text;
  std::string eol;
};

struct RawSpan {
  size_t first_line = 0;
  size_t last_line = 0;  // inclusive
  std::string directive;
};

// One parsed smali class file. The line table is the source of truth for
// emission; the structured members index into it.
struct SmaliUnit {
  std::string class_name;
  std::string super_name;
  std::vector<std::string> access_flags;
  std::vector<std::string> interfaces;
  std::vector<FieldDecl> fields;
  std::vector<SmaliMethod> methods;

  std::vector<SourceLine> lines;
  RawSpan raw_preamble;  // lines before the first field or method
  RawSpan raw_trailing;  // lines after the last member; empty if first > last
  std::vector<RawSpan> opaque_spans;  // class-level annotations, unknown directives

  // Line after which new field declarations may be inserted.
  size_t field_insert_after = 0;
};

}  // namespace dlprep::smali

#endif  // DLPREP_SMALI_AST_H_
