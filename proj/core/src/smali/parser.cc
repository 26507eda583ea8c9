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

#include "dlprep/smali/parser.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <limits>
#include <utility>

namespace dlprep::smali {

SyntaxError::SyntaxError(size_t line, size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

constexpr std::array<std::string_view, 21> kAccessFlags = {
    "public",    "private",      "protected",
    "static",    "final",        "synchronized",
    "volatile",  "bridge",       "transient",
    "varargs",   "native",       "interface",
    "abstract",  "strictfp",     "synthetic",
    "annotation", "enum",        "constructor",
    "declared-synchronized", "whitelist", "greylist"};

bool IsAccessFlag(std::string_view token) {
  return std::find(kAccessFlags.begin(), kAccessFlags.end(), token) !=
         kAccessFlags.end();
}

bool IsSpace(char c) { return c == ' ' || c == '\t'; }

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (IsSpace(s.front()) || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (IsSpace(s.back()) || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

size_t LeadingSpace(std::string_view s) {
  size_t i = 0;
  while (i < s.size() && IsSpace(s[i])) ++i;
  return i;
}

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && IsSpace(s[i])) ++i;
    size_t start = i;
    while (i < s.size() && !IsSpace(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<SourceLine> SplitLines(std::string_view text) {
  std::vector<SourceLine> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back({std::string(text.substr(pos)), ""});
      break;
    }
    size_t end = nl;
    std::string eol = "\n";
    if (end > pos && text[end - 1] == '\r') {
      --end;
      eol = "\r\n";
    }
    lines.push_back({std::string(text.substr(pos, end - pos)), eol});
    pos = nl + 1;
  }
  return lines;
}

void CheckUtf8(std::string_view text) {
  size_t line = 1, col = 1;
  size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    size_t extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xe0) == 0xc0 && c >= 0xc2) {
      extra = 1;
    } else if ((c & 0xf0) == 0xe0) {
      extra = 2;
    } else if ((c & 0xf8) == 0xf0 && c <= 0xf4) {
      extra = 3;
    } else {
      throw SyntaxError(line, col, "invalid UTF-8 byte");
    }
    for (size_t k = 1; k <= extra; ++k) {
      if (i + k >= text.size() ||
          (static_cast<unsigned char>(text[i + k]) & 0xc0) != 0x80)
        throw SyntaxError(line, col, "invalid UTF-8 continuation byte");
    }
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    i += extra + 1;
  }
}

// Offset of a '#' comment outside string/char literals, or npos.
size_t FindComment(std::string_view s) {
  bool in_string = false, in_char = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_string || in_char) {
      if (c == '\\') {
        ++i;
      } else if (in_string && c == '"') {
        in_string = false;
      } else if (in_char && c == '\'') {
        in_char = false;
      }
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '\'') in_char = true;
    else if (c == '#') return i;
  }
  return std::string_view::npos;
}

struct Token {
  std::string_view text;
  size_t column = 0;  // 1-based, within the physical line
};

// Splits on commas outside braces and quotes.
std::vector<Token> SplitOperands(std::string_view s, size_t base_column) {
  std::vector<Token> out;
  int depth = 0;
  bool in_string = false, in_char = false;
  size_t start = 0;
  auto flush = [&](size_t end) {
    std::string_view piece = s.substr(start, end - start);
    size_t lead = LeadingSpace(piece);
    std::string_view trimmed = Trim(piece);
    if (!trimmed.empty() || !out.empty() || end < s.size())
      out.push_back({trimmed, base_column + start + lead});
  };
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_string || in_char) {
      if (c == '\\') {
        ++i;
      } else if (in_string && c == '"') {
        in_string = false;
      } else if (in_char && c == '\'') {
        in_char = false;
      }
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '\'') in_char = true;
    else if (c == '{') ++depth;
    else if (c == '}') --depth;
    else if (c == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  if (start < s.size() || !out.empty()) flush(s.size());
  return out;
}

bool IsClassDescriptor(std::string_view d) {
  if (d.size() < 3 || d.front() != 'L' || d.back() != ';') return false;
  std::string_view body = d.substr(1, d.size() - 2);
  if (body.front() == '/' || body.back() == '/') return false;
  for (size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == ';' || c == '(' || c == ')' || c == '.' || c == '[' ||
        IsSpace(c) || c == ':' || c == ',')
      return false;
    if (c == '/' && i + 1 < body.size() && body[i + 1] == '/') return false;
  }
  return true;
}

// Length of the descriptor at the start of |s|, or 0 if malformed.
size_t DescriptorLength(std::string_view s, bool allow_void) {
  size_t i = 0;
  while (i < s.size() && s[i] == '[') ++i;
  if (i >= s.size()) return 0;
  if (i > 255) return 0;
  char c = s[i];
  if (c == 'L') {
    size_t semi = s.find(';', i);
    if (semi == std::string_view::npos) return 0;
    if (!IsClassDescriptor(s.substr(i, semi - i + 1))) return 0;
    return semi + 1;
  }
  if (c == 'V') return (allow_void && i == 0) ? 1 : 0;
  if (std::string_view("ZBSCIJFD").find(c) != std::string_view::npos)
    return i + 1;
  return 0;
}

}  // namespace

bool IsValidTypeDescriptor(std::string_view d) {
  return !d.empty() && DescriptorLength(d, true) == d.size();
}

bool IsPrimitiveDescriptor(std::string_view d) {
  return d.size() == 1 &&
         std::string_view("ZBSCIJFD").find(d[0]) != std::string_view::npos;
}

bool ParsePrototype(std::string_view proto, std::vector<std::string>* params,
                    std::string* return_type) {
  if (proto.empty() || proto.front() != '(') return false;
  size_t close = proto.find(')');
  if (close == std::string_view::npos) return false;
  std::vector<std::string> parsed;
  std::string_view list = proto.substr(1, close - 1);
  while (!list.empty()) {
    size_t n = DescriptorLength(list, false);
    if (n == 0) return false;
    parsed.emplace_back(list.substr(0, n));
    list.remove_prefix(n);
  }
  std::string_view ret = proto.substr(close + 1);
  if (ret.empty() || DescriptorLength(ret, true) != ret.size()) return false;
  if (params) *params = std::move(parsed);
  if (return_type) *return_type = std::string(ret);
  return true;
}

std::optional<Literal> ParseIntegerLiteral(std::string_view text) {
  Literal lit;
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && s.front() == '-') {
    negative = true;
    s.remove_prefix(1);
  }
  if (!s.empty() && std::string_view("LlTtSs").find(s.back()) !=
                        std::string_view::npos) {
    lit.suffix = std::string(1, s.back());
    s.remove_suffix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
    lit.radix = Radix::kHex;
  } else {
    lit.radix = Radix::kDecimal;
  }
  if (s.empty()) return std::nullopt;
  uint64_t magnitude = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), magnitude, base);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  constexpr uint64_t kMaxPositive =
      static_cast<uint64_t>(std::numeric_limits<int64_t>::max());
  if (negative) {
    if (magnitude > kMaxPositive + 1) return std::nullopt;
    lit.value = magnitude == kMaxPositive + 1
                    ? std::numeric_limits<int64_t>::min()
                    : -static_cast<int64_t>(magnitude);
  } else {
    if (magnitude > kMaxPositive) return std::nullopt;
    lit.value = static_cast<int64_t>(magnitude);
  }
  return lit;
}

std::optional<Register> ParseRegister(std::string_view text) {
  if (text.size() < 2 || (text[0] != 'v' && text[0] != 'p')) return std::nullopt;
  uint32_t n = 0;
  std::string_view digits = text.substr(1);
  if (!std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || n > 65535) return std::nullopt;
  return Register{text[0] == 'p' ? Register::Kind::kParam : Register::Kind::kLocal,
                  n};
}

namespace {

class UnitParser {
 public:
  explicit UnitParser(std::string_view text) : text_(text) {}

  SmaliUnit Parse();

 private:
  [[noreturn]] void Fail(size_t line_index, size_t column,
                         const std::string& message) const {
    throw SyntaxError(line_index + 1, column, message);
  }

  std::string_view LineText(size_t i) const { return unit_.lines[i].text; }

  size_t ColumnOf(size_t i, std::string_view piece) const {
    std::string_view line = LineText(i);
    if (piece.data() >= line.data() && piece.data() <= line.data() + line.size())
      return static_cast<size_t>(piece.data() - line.data()) + 1;
    return LeadingSpace(line) + 1;
  }

  size_t SkipBlock(size_t begin, std::string_view end_directive);
  void ParseClassDirective(size_t i, std::string_view trimmed);
  void ParseField(size_t i, std::string_view trimmed);
  size_t ParseMethod(size_t header);
  void ParseMethodHeader(size_t i, std::string_view trimmed, SmaliMethod* m);
  Instruction ParseInstruction(size_t i, std::string_view trimmed);
  Operand ParseStrictOperand(size_t line, const Token& tok, char kind);
  FieldRef ParseFieldRef(size_t line, const Token& tok);
  MethodRef ParseMethodRef(size_t line, const Token& tok);
  RegisterList ParseRegisterList(size_t line, const Token& tok);
  Operand ParseLenientOperand(const Token& tok);
  void ParseCatch(size_t i, std::string_view trimmed, SmaliMethod* m);
  void CheckRegisterRanges(const SmaliMethod& m);

  std::string_view text_;
  SmaliUnit unit_;
  bool saw_class_ = false;
  size_t header_end_ = 0;  // last .class/.super/.source/.implements line
  std::optional<size_t> last_field_end_;
};

size_t UnitParser::SkipBlock(size_t begin, std::string_view end_directive) {
  for (size_t j = begin + 1; j < unit_.lines.size(); ++j) {
    std::string_view t = Trim(LineText(j));
    if (t.starts_with(end_directive)) return j;
    if (t.starts_with(".end method") || t.starts_with(".method ")) break;
  }
  Fail(begin, LeadingSpace(LineText(begin)) + 1,
       "unterminated block, expected '" + std::string(end_directive) + "'");
}

void UnitParser::ParseClassDirective(size_t i, std::string_view t) {
  auto tokens = SplitWhitespace(t);
  if (saw_class_) Fail(i, 1, "duplicate .class directive");
  if (tokens.size() < 2) Fail(i, 1, ".class requires a descriptor");
  for (size_t k = 1; k + 1 < tokens.size(); ++k) {
    if (!IsAccessFlag(tokens[k]))
      Fail(i, ColumnOf(i, tokens[k]), "unknown access flag '" +
                                          std::string(tokens[k]) + "'");
    unit_.access_flags.emplace_back(tokens[k]);
  }
  if (!IsClassDescriptor(tokens.back()))
    Fail(i, ColumnOf(i, tokens.back()),
         "bad class descriptor '" + std::string(tokens.back()) + "'");
  unit_.class_name = std::string(tokens.back());
  saw_class_ = true;
  header_end_ = i;
}

void UnitParser::ParseField(size_t i, std::string_view t) {
  // .field <flags> name:Type [= value]
  std::string_view decl = t;
  size_t eq = std::string_view::npos;
  {
    bool in_string = false;
    for (size_t k = 0; k < t.size(); ++k) {
      if (t[k] == '"') in_string = !in_string;
      if (!in_string && t[k] == '=' && k > 0 && IsSpace(t[k - 1])) {
        eq = k;
        break;
      }
    }
  }
  if (eq != std::string_view::npos) decl = Trim(t.substr(0, eq));
  auto tokens = SplitWhitespace(decl);
  if (tokens.size() < 2) Fail(i, 1, ".field requires name:type");
  FieldDecl field;
  for (size_t k = 1; k + 1 < tokens.size(); ++k) {
    if (!IsAccessFlag(tokens[k]))
      Fail(i, ColumnOf(i, tokens[k]),
           "unknown access flag '" + std::string(tokens[k]) + "'");
    field.access_flags.emplace_back(tokens[k]);
  }
  std::string_view name_type = tokens.back();
  size_t colon = name_type.find(':');
  if (colon == std::string_view::npos || colon == 0)
    Fail(i, ColumnOf(i, name_type), "field declaration needs name:type");
  std::string_view type = name_type.substr(colon + 1);
  if (!IsValidTypeDescriptor(type) || type == "V")
    Fail(i, ColumnOf(i, type), "bad field type '" + std::string(type) + "'");
  field.name = std::string(name_type.substr(0, colon));
  field.type = std::string(type);
  field.line_index = i;
  unit_.fields.push_back(std::move(field));
  last_field_end_ = i;
}

void UnitParser::ParseMethodHeader(size_t i, std::string_view t,
                                   SmaliMethod* m) {
  auto tokens = SplitWhitespace(t);
  if (tokens.size() < 2) Fail(i, 1, ".method requires a name and prototype");
  for (size_t k = 1; k + 1 < tokens.size(); ++k) {
    if (!IsAccessFlag(tokens[k]))
      Fail(i, ColumnOf(i, tokens[k]),
           "unknown access flag '" + std::string(tokens[k]) + "'");
    m->access_flags.emplace_back(tokens[k]);
  }
  std::string_view sig = tokens.back();
  size_t paren = sig.find('(');
  if (paren == std::string_view::npos || paren == 0)
    Fail(i, ColumnOf(i, sig), "malformed method header");
  m->name = std::string(sig.substr(0, paren));
  if (m->name.find_first_of("/;[") != std::string::npos)
    Fail(i, ColumnOf(i, sig), "bad method name '" + m->name + "'");
  if (!ParsePrototype(sig.substr(paren), &m->param_types, &m->return_type))
    Fail(i, ColumnOf(i, sig) + paren,
         "bad method prototype '" + std::string(sig.substr(paren)) + "'");
  m->is_constructor = m->name == "<init>";
  m->is_static = std::find(m->access_flags.begin(), m->access_flags.end(),
                           "static") != m->access_flags.end();
  uint32_t words = m->is_static ? 0 : 1;
  for (const auto& p : m->param_types) words += (p == "J" || p == "D") ? 2 : 1;
  m->param_words = words;
  m->header_line = i;
}

FieldRef UnitParser::ParseFieldRef(size_t line, const Token& tok) {
  std::string_view s = tok.text;
  size_t arrow = s.find("->");
  if (arrow == std::string_view::npos)
    Fail(line, tok.column, "expected field reference, got '" +
                               std::string(s) + "'");
  std::string_view owner = s.substr(0, arrow);
  std::string_view rest = s.substr(arrow + 2);
  size_t colon = rest.find(':');
  if (!IsValidTypeDescriptor(owner) || IsPrimitiveDescriptor(owner))
    Fail(line, tok.column, "bad owner descriptor '" + std::string(owner) + "'");
  if (colon == std::string_view::npos || colon == 0)
    Fail(line, tok.column + arrow + 2, "field reference needs name:type");
  std::string_view type = rest.substr(colon + 1);
  if (!IsValidTypeDescriptor(type) || type == "V")
    Fail(line, tok.column + arrow + 3 + colon,
         "bad field type '" + std::string(type) + "'");
  return FieldRef{std::string(owner), std::string(rest.substr(0, colon)),
                  std::string(type)};
}

MethodRef UnitParser::ParseMethodRef(size_t line, const Token& tok) {
  std::string_view s = tok.text;
  size_t arrow = s.find("->");
  if (arrow == std::string_view::npos)
    Fail(line, tok.column, "expected method reference, got '" +
                               std::string(s) + "'");
  std::string_view owner = s.substr(0, arrow);
  if (!IsValidTypeDescriptor(owner) || IsPrimitiveDescriptor(owner))
    Fail(line, tok.column, "bad owner descriptor '" + std::string(owner) + "'");
  std::string_view rest = s.substr(arrow + 2);
  size_t paren = rest.find('(');
  if (paren == std::string_view::npos || paren == 0)
    Fail(line, tok.column + arrow + 2, "method reference needs name(proto)");
  MethodRef ref;
  ref.owner_class = std::string(owner);
  ref.method_name = std::string(rest.substr(0, paren));
  if (!ParsePrototype(rest.substr(paren), &ref.param_types, &ref.return_type))
    Fail(line, tok.column + arrow + 2 + paren,
         "bad method prototype '" + std::string(rest.substr(paren)) + "'");
  return ref;
}

RegisterList UnitParser::ParseRegisterList(size_t line, const Token& tok) {
  std::string_view s = tok.text;
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    Fail(line, tok.column, "expected register list in braces, got '" +
                               std::string(s) + "'");
  std::string_view inner = Trim(s.substr(1, s.size() - 2));
  RegisterList list;
  if (inner.empty()) return list;
  size_t dots = inner.find("..");
  if (dots != std::string_view::npos) {
    auto first = ParseRegister(Trim(inner.substr(0, dots)));
    auto last = ParseRegister(Trim(inner.substr(dots + 2)));
    if (!first || !last || first->kind != last->kind ||
        last->number < first->number)
      Fail(line, tok.column, "bad register range '" + std::string(s) + "'");
    list.is_range = true;
    list.registers = {*first, *last};
    return list;
  }
  size_t start = 0;
  while (start <= inner.size()) {
    size_t comma = inner.find(',', start);
    std::string_view piece =
        Trim(inner.substr(start, comma == std::string_view::npos
                                     ? std::string_view::npos
                                     : comma - start));
    auto reg = ParseRegister(piece);
    if (!reg)
      Fail(line, ColumnOf(line, piece),
           "bad register '" + std::string(piece) + "'");
    list.registers.push_back(*reg);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return list;
}

// kind: r register, l integer literal, s string, t type, f field ref,
// m method ref, L register list, b label
Operand UnitParser::ParseStrictOperand(size_t line, const Token& tok,
                                       char kind) {
  std::string_view s = tok.text;
  switch (kind) {
    case 'r': {
      auto reg = ParseRegister(s);
      if (!reg) Fail(line, tok.column, "bad register '" + std::string(s) + "'");
      return *reg;
    }
    case 'l': {
      auto lit = ParseIntegerLiteral(s);
      if (!lit)
        Fail(line, tok.column, "bad integer literal '" + std::string(s) + "'");
      return *lit;
    }
    case 's':
      if (s.size() < 2 || s.front() != '"' || s.back() != '"')
        Fail(line, tok.column, "expected string literal");
      return StringLiteral{std::string(s.substr(1, s.size() - 2))};
    case 't':
      if (!IsValidTypeDescriptor(s) || s == "V")
        Fail(line, tok.column, "bad type descriptor '" + std::string(s) + "'");
      return TypeRef{std::string(s)};
    case 'f':
      return ParseFieldRef(line, tok);
    case 'm':
      return ParseMethodRef(line, tok);
    case 'L':
      return ParseRegisterList(line, tok);
    case 'b':
      if (s.size() < 2 || s.front() != ':')
        Fail(line, tok.column, "expected label, got '" + std::string(s) + "'");
      return LabelRef{std::string(s.substr(1))};
  }
  Fail(line, tok.column, "internal: unknown operand kind");
}

Operand UnitParser::ParseLenientOperand(const Token& tok) {
  std::string_view s = tok.text;
  if (auto reg = ParseRegister(s)) return *reg;
  if (auto lit = ParseIntegerLiteral(s)) return *lit;
  if (s.size() >= 2 && s.front() == ':') return LabelRef{std::string(s.substr(1))};
  if (s.size() >= 2 && s.front() == '{' && s.back() == '}') {
    std::string_view inner = Trim(s.substr(1, s.size() - 2));
    RegisterList list;
    size_t dots = inner.find("..");
    if (dots != std::string_view::npos) {
      auto a = ParseRegister(Trim(inner.substr(0, dots)));
      auto b = ParseRegister(Trim(inner.substr(dots + 2)));
      if (a && b) {
        list.is_range = true;
        list.registers = {*a, *b};
        return list;
      }
    } else {
      bool ok = true;
      size_t start = 0;
      while (!inner.empty() && start <= inner.size()) {
        size_t comma = inner.find(',', start);
        auto reg = ParseRegister(Trim(inner.substr(
            start, comma == std::string_view::npos ? std::string_view::npos
                                                   : comma - start)));
        if (!reg) {
          ok = false;
          break;
        }
        list.registers.push_back(*reg);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (ok) return list;
    }
  }
  return RawOperand{std::string(s)};
}

Instruction UnitParser::ParseInstruction(size_t i, std::string_view line) {
  Instruction insn;
  insn.raw_text = unit_.lines[i].text;
  insn.line_index = i;
  size_t lead = LeadingSpace(line);
  std::string_view body = line.substr(lead);
  size_t comment = FindComment(body);
  if (comment != std::string_view::npos) body = body.substr(0, comment);
  while (!body.empty() && (IsSpace(body.back()) || body.back() == '\r'))
    body.remove_suffix(1);
  size_t op_end = 0;
  while (op_end < body.size() && !IsSpace(body[op_end])) ++op_end;
  insn.opcode = std::string(body.substr(0, op_end));
  insn.family = ClassifyOpcode(insn.opcode);
  std::string_view rest = body.substr(op_end);
  size_t rest_col = lead + op_end + 1;
  auto tokens = SplitOperands(rest, rest_col);
  for (const auto& tok : tokens) {
    if (tok.text.empty())
      Fail(i, tok.column, "empty operand in '" + insn.opcode + "'");
  }

  std::string_view shape;
  switch (insn.family) {
    case OpFamily::kConst: shape = "rl"; break;
    case OpFamily::kConstString: shape = "rs"; break;
    case OpFamily::kConstClass: shape = "rt"; break;
    case OpFamily::kMove: shape = "rr"; break;
    case OpFamily::kMoveResult:
    case OpFamily::kMoveException:
    case OpFamily::kThrow: shape = "r"; break;
    case OpFamily::kReturn:
      shape = insn.opcode.starts_with("return-void") ? "" : "r";
      break;
    case OpFamily::kInvoke: shape = "Lm"; break;
    case OpFamily::kInstanceGet:
    case OpFamily::kInstancePut: shape = "rrf"; break;
    case OpFamily::kStaticGet:
    case OpFamily::kStaticPut: shape = "rf"; break;
    case OpFamily::kNewInstance:
    case OpFamily::kCheckCast: shape = "rt"; break;
    case OpFamily::kGoto: shape = "b"; break;
    case OpFamily::kIf:
      shape = insn.opcode.ends_with("z") ? "rb" : "rrb";
      break;
    case OpFamily::kSwitch: shape = "rb"; break;
    case OpFamily::kOther:
      for (const auto& tok : tokens) insn.operands.push_back(ParseLenientOperand(tok));
      return insn;
  }
  if (tokens.size() != shape.size())
    Fail(i, lead + 1,
         "'" + insn.opcode + "' expects " + std::to_string(shape.size()) +
             " operand(s), got " + std::to_string(tokens.size()));
  for (size_t k = 0; k < shape.size(); ++k)
    insn.operands.push_back(ParseStrictOperand(i, tokens[k], shape[k]));
  return insn;
}

void UnitParser::ParseCatch(size_t i, std::string_view t, SmaliMethod* m) {
  CatchDirective c;
  c.line_index = i;
  std::string_view rest;
  if (t.starts_with(".catchall")) {
    rest = Trim(t.substr(9));
  } else {
    rest = Trim(t.substr(6));
    size_t sp = rest.find_first_of(" \t");
    if (sp == std::string_view::npos) Fail(i, 1, "malformed .catch");
    std::string_view type = rest.substr(0, sp);
    if (!IsClassDescriptor(type))
      Fail(i, ColumnOf(i, type), "bad exception type '" + std::string(type) + "'");
    c.exception_type = std::string(type);
    rest = Trim(rest.substr(sp));
  }
  size_t open = rest.find('{'), close = rest.find('}');
  if (open != 0 || close == std::string_view::npos)
    Fail(i, ColumnOf(i, rest), "malformed try range");
  std::string_view range = rest.substr(1, close - 1);
  size_t dots = range.find("..");
  if (dots == std::string_view::npos) Fail(i, ColumnOf(i, rest), "malformed try range");
  std::string_view a = Trim(range.substr(0, dots));
  std::string_view b = Trim(range.substr(dots + 2));
  std::string_view h = Trim(rest.substr(close + 1));
  if (a.size() < 2 || a[0] != ':' || b.size() < 2 || b[0] != ':' ||
      h.size() < 2 || h[0] != ':')
    Fail(i, ColumnOf(i, rest), "malformed try range labels");
  c.start_label = std::string(a.substr(1));
  c.end_label = std::string(b.substr(1));
  c.handler_label = std::string(h.substr(1));
  m->catches.push_back(std::move(c));
}

void UnitParser::CheckRegisterRanges(const SmaliMethod& m) {
  if (!m.registers) return;
  auto check = [&](const Instruction& insn, const Register& r) {
    bool ok = r.kind == Register::Kind::kLocal ? r.number < *m.registers
                                               : r.number < m.param_words;
    if (!ok) {
      std::string name = r.ToString();
      size_t col = insn.raw_text.find(name);
      Fail(insn.line_index, col == std::string::npos ? 1 : col + 1,
           "register " + name + " out of range for " + m.Signature());
    }
  };
  for (const auto& insn : m.instructions) {
    for (const auto& op : insn.operands) {
      if (const auto* r = std::get_if<Register>(&op)) check(insn, *r);
      if (const auto* l = std::get_if<RegisterList>(&op))
        for (const auto& r : l->registers) check(insn, r);
    }
  }
}

size_t UnitParser::ParseMethod(size_t header) {
  SmaliMethod m;
  ParseMethodHeader(header, Trim(LineText(header)), &m);
  bool saw_registers = false;
  std::vector<std::string> pending_labels;
  for (size_t i = header + 1; i < unit_.lines.size(); ++i) {
    std::string_view raw = LineText(i);
    std::string_view t = Trim(raw);
    if (t.empty() || t.front() == '#') continue;
    if (t.starts_with(".end method")) {
      m.end_line = i;
      for (const auto& c : m.catches) {
        for (const auto* label : {&c.start_label, &c.end_label, &c.handler_label})
          if (!m.labels.contains(*label))
            Fail(c.line_index, 1, "undefined label ':" + *label + "'");
      }
      CheckRegisterRanges(m);
      unit_.methods.push_back(std::move(m));
      return i;
    }
    if (t.starts_with(".method ") || t == ".method")
      Fail(i, LeadingSpace(raw) + 1,
           "'.method' before '.end method' of " + m.Signature());
    if (t.front() == ':') {
      std::string_view label = Trim(t.substr(1));
      if (label.empty() || label.find_first_of(" \t") != std::string_view::npos)
        Fail(i, LeadingSpace(raw) + 1, "bad label");
      m.labels[std::string(label)] = m.instructions.size();
      pending_labels.emplace_back(label);
      continue;
    }
    if (t.front() == '.') {
      auto words = SplitWhitespace(t);
      std::string_view d = words.front();
      if (d == ".registers" || d == ".locals") {
        if (saw_registers) Fail(i, LeadingSpace(raw) + 1, "duplicate register directive");
        uint32_t n = 0;
        if (words.size() != 2 ||
            std::from_chars(words[1].data(), words[1].data() + words[1].size(), n)
                    .ptr != words[1].data() + words[1].size())
          Fail(i, LeadingSpace(raw) + 1, "malformed " + std::string(d));
        saw_registers = true;
        m.registers = d == ".registers" ? n : n + m.param_words;
        if (*m.registers < m.param_words)
          Fail(i, LeadingSpace(raw) + 1, ".registers smaller than parameter words");
        continue;
      }
      if (d == ".catch" || d == ".catchall") {
        ParseCatch(i, t, &m);
        continue;
      }
      if (d == ".annotation") { i = SkipBlock(i, ".end annotation"); continue; }
      if (d == ".packed-switch" || d == ".sparse-switch") {
        std::string end = d == ".packed-switch" ? ".end packed-switch"
                                                : ".end sparse-switch";
        size_t last = SkipBlock(i, end);
        std::vector<std::string> targets;
        for (size_t k = i + 1; k < last; ++k) {
          std::string_view entry = Trim(LineText(k));
          size_t colon = entry.rfind(':');
          if (colon == std::string_view::npos) continue;
          targets.emplace_back(Trim(entry.substr(colon + 1)));
        }
        for (const auto& label : pending_labels) m.switch_targets[label] = targets;
        pending_labels.clear();
        i = last;
        continue;
      }
      if (d == ".array-data") { i = SkipBlock(i, ".end array-data"); continue; }
      // .line, .param, .end param, .local, .prologue, ...: line-preserved.
      continue;
    }
    m.instructions.push_back(ParseInstruction(i, raw));
    pending_labels.clear();
  }
  Fail(header, 1, "missing '.end method' for " + m.Signature());
}

SmaliUnit UnitParser::Parse() {
  CheckUtf8(text_);
  unit_.lines = SplitLines(text_);
  std::optional<size_t> first_member, last_member;
  for (size_t i = 0; i < unit_.lines.size(); ++i) {
    std::string_view raw = LineText(i);
    std::string_view t = Trim(raw);
    if (t.empty() || t.front() == '#') continue;
    auto words = SplitWhitespace(t);
    std::string_view d = words.front();
    if (!saw_class_ && d != ".class")
      Fail(i, LeadingSpace(raw) + 1, "expected '.class' before '" + std::string(d) + "'");
    if (d == ".class") {
      ParseClassDirective(i, t);
    } else if (d == ".super" || d == ".implements") {
      if (words.size() != 2 || !IsClassDescriptor(words[1]))
        Fail(i, LeadingSpace(raw) + 1, "bad " + std::string(d) + " directive");
      if (d == ".super") unit_.super_name = std::string(words[1]);
      else unit_.interfaces.emplace_back(words[1]);
      header_end_ = i;
    } else if (d == ".source") {
      header_end_ = i;
    } else if (d == ".field") {
      ParseField(i, t);
      if (!first_member) first_member = i;
      last_member = i;
    } else if (d == ".end") {
      if (words.size() >= 2 && words[1] == "field" && last_field_end_) {
        last_field_end_ = i;
        last_member = i;
      } else if (words.size() >= 2 && words[1] == "method") {
        Fail(i, LeadingSpace(raw) + 1, "'.end method' without matching '.method'");
      } else {
        Fail(i, LeadingSpace(raw) + 1, "unexpected '" + std::string(t) + "'");
      }
    } else if (d == ".method") {
      size_t end = ParseMethod(i);
      if (!first_member) first_member = i;
      last_member = end;
      i = end;
    } else if (d == ".annotation") {
      size_t end = SkipBlock(i, ".end annotation");
      unit_.opaque_spans.push_back({i, end, ".annotation"});
      i = end;
    } else if (d.front() == '.') {
      unit_.opaque_spans.push_back({i, i, std::string(d)});
    } else {
      Fail(i, LeadingSpace(raw) + 1, "unexpected text at class level: '" +
                                         std::string(t) + "'");
    }
  }
  if (!saw_class_) Fail(0, 1, "missing '.class' directive");

  size_t n = unit_.lines.size();
  if (first_member) {
    unit_.raw_preamble = {0, *first_member == 0 ? 0 : *first_member - 1, "preamble"};
    unit_.raw_trailing = {*last_member + 1, n == 0 ? 0 : n - 1, "trailing"};
  } else {
    unit_.raw_preamble = {0, n == 0 ? 0 : n - 1, "preamble"};
    unit_.raw_trailing = {n, n == 0 ? 0 : n - 1, "trailing"};
  }
  unit_.field_insert_after = last_field_end_.value_or(header_end_);
  return std::move(unit_);
}

}  // namespace

SmaliUnit ParseUnit(std::string_view text) { return UnitParser(text).Parse(); }

}  // namespace dlprep::smali
