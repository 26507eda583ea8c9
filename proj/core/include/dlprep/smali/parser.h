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

#ifndef DLPREP_SMALI_PARSER_H_
#define DLPREP_SMALI_PARSER_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dlprep/smali/ast.h"

namespace dlprep::smali {

// Raised for malformed input. Line and column are 1-based.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(size_t line, size_t column, const std::string& message);

  size_t line() const { return line_; }
  size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  size_t line_;
  size_t column_;
  std::string detail_;
};

// Parses one class file. Unsupported directives are kept as opaque spans and
// unknown opcodes as pass-through instructions; EmitUnit() of the result
// reproduces |text| exactly.
SmaliUnit ParseUnit(std::string_view text);

// "I", "Landroid/graphics/Bitmap;", "[[J" ...
bool IsValidTypeDescriptor(std::string_view descriptor);
bool IsPrimitiveDescriptor(std::string_view descriptor);

// Splits "(Landroid/graphics/Bitmap;I)V" into parameter and return types.
// Returns false on malformed prototypes.
bool ParsePrototype(std::string_view proto, std::vector<std::string>* params,
                    std::string* return_type);

// Accepts smali integer spellings: 180, -5, 0xb4, -0x1, 0x10L, 0x7ft.
std::optional<Literal> ParseIntegerLiteral(std::string_view text);
std::optional<Register> ParseRegister(std::string_view text);

}  // namespace dlprep::smali

#endif  // DLPREP_SMALI_PARSER_H_
