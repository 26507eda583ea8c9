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

#include "dlprep/smali/emitter.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "dlprep/smali/parser.h"

namespace dlprep::smali {

std::string EmitUnit(const SmaliUnit& unit) {
  size_t total = 0;
  for (const auto& line : unit.lines) total += line.text.size() + line.eol.size();
  std::string out;
  out.reserve(total);
  for (const auto& line : unit.lines) {
    out += line.text;
    out += line.eol;
  }
  return out;
}

std::string RenderLiteral(const Literal& literal) {
  std::string out;
  if (literal.radix == Radix::kDecimal) {
    out = std::to_string(literal.value);
  } else {
    uint64_t magnitude = literal.value < 0
                             ? ~static_cast<uint64_t>(literal.value) + 1
                             : static_cast<uint64_t>(literal.value);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%llx",
                  static_cast<unsigned long long>(magnitude));
    out = std::string(literal.value < 0 ? "-0x" : "0x") + buf;
  }
  return out + literal.suffix;
}

namespace {

struct OperandRenderer {
  std::string operator()(const Register& r) const { return r.ToString(); }
  std::string operator()(const RegisterList& l) const {
    std::string out = "{";
    if (l.is_range && l.registers.size() == 2) {
      out += l.registers[0].ToString() + " .. " + l.registers[1].ToString();
    } else {
      for (size_t i = 0; i < l.registers.size(); ++i) {
        if (i) out += ", ";
        out += l.registers[i].ToString();
      }
    }
    return out + "}";
  }
  std::string operator()(const Literal& l) const { return RenderLiteral(l); }
  std::string operator()(const FieldRef& f) const { return f.ToString(); }
  std::string operator()(const MethodRef& m) const { return m.ToString(); }
  std::string operator()(const StringLiteral& s) const {
    return "\"" + s.escaped + "\"";
  }
  std::string operator()(const TypeRef& t) const { return t.descriptor; }
  std::string operator()(const LabelRef& l) const { return ":" + l.name; }
  std::string operator()(const RawOperand& r) const { return r.text; }
};

}  // namespace

std::string RenderOperand(const Operand& operand) {
  return std::visit(OperandRenderer{}, operand);
}

std::string RenderInstruction(const Instruction& instruction) {
  std::string out(kEmitIndent);
  out += instruction.opcode;
  for (size_t i = 0; i < instruction.operands.size(); ++i) {
    out += i ? ", " : " ";
    out += RenderOperand(instruction.operands[i]);
  }
  return out;
}

SmaliUnit ApplyLineEdits(const SmaliUnit& unit, std::span<const LineEdit> edits) {
  std::vector<const LineEdit*> ordered;
  ordered.reserve(edits.size());
  for (const auto& e : edits) {
    if (e.first_line > unit.lines.size() ||
        e.first_line + e.line_count > unit.lines.size())
      throw std::invalid_argument("line edit out of range");
    ordered.push_back(&e);
  }
  std::sort(ordered.begin(), ordered.end(), [](const LineEdit* a, const LineEdit* b) {
    if (a->first_line != b->first_line) return a->first_line < b->first_line;
    return a->line_count < b->line_count;  // insertions first
  });
  for (size_t i = 1; i < ordered.size(); ++i) {
    const LineEdit* prev = ordered[i - 1];
    if (prev->first_line + prev->line_count > ordered[i]->first_line ||
        (prev->first_line == ordered[i]->first_line &&
         (prev->line_count == 0) == (ordered[i]->line_count == 0)))
      throw std::invalid_argument("overlapping line edits");
  }

  // New lines inherit the terminator convention of the file.
  std::string default_eol = "\n";
  for (const auto& line : unit.lines) {
    if (!line.eol.empty()) {
      default_eol = line.eol;
      break;
    }
  }

  std::string out;
  size_t cursor = 0;
  auto copy_until = [&](size_t end) {
    for (; cursor < end; ++cursor) {
      out += unit.lines[cursor].text;
      out += unit.lines[cursor].eol;
    }
  };
  for (const LineEdit* e : ordered) {
    copy_until(e->first_line);
    std::string eol = default_eol;
    if (e->line_count > 0) eol = unit.lines[e->first_line].eol;
    for (size_t k = 0; k < e->replacement.size(); ++k) {
      out += e->replacement[k];
      bool last_of_file = e->first_line + e->line_count == unit.lines.size() &&
                          k + 1 == e->replacement.size() && e->line_count > 0;
      out += last_of_file ? unit.lines[e->first_line + e->line_count - 1].eol
                          : (eol.empty() ? default_eol : eol);
    }
    cursor = e->first_line + e->line_count;
  }
  copy_until(unit.lines.size());
  return ParseUnit(out);
}

}  // namespace dlprep::smali
