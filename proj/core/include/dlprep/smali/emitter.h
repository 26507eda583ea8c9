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

#ifndef DLPREP_SMALI_EMITTER_H_
#define DLPREP_SMALI_EMITTER_H_

#include <span>
#include <string>
#include <vector>

#include "dlprep/smali/ast.h"

namespace dlprep::smali {

// Indentation used for lines rendered from structured form.
inline constexpr std::string_view kEmitIndent = "    ";

std::string EmitUnit(const SmaliUnit& unit);

std::string RenderOperand(const Operand& operand);
std::string RenderLiteral(const Literal& literal);
// Renders "    opcode op, op, ..." using each literal's recorded radix.
std::string RenderInstruction(const Instruction& instruction);

// Replaces |line_count| lines starting at |first_line| with |replacement|
// (rendered text, no terminators). A zero |line_count| inserts before
// |first_line|.
struct LineEdit {
  size_t first_line = 0;
  size_t line_count = 0;
  std::vector<std::string> replacement;
};

// Applies non-overlapping edits and reparses the result. The input unit is
// left untouched. Throws std::invalid_argument on overlapping or
// out-of-range edits and SyntaxError if the edited text no longer parses.
SmaliUnit ApplyLineEdits(const SmaliUnit& unit, std::span<const LineEdit> edits);

}  // namespace dlprep::smali

#endif  // DLPREP_SMALI_EMITTER_H_
