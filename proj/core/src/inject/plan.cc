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

#include "dlprep/inject/plan.h"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

#include "dlprep/smali/emitter.h"

namespace dlprep::inject {

using locate::Axis;
using locate::ConstructorMatch;
using locate::DimensionSource;
using smali::Instruction;
using smali::Literal;
using smali::SmaliMethod;
using smali::SmaliUnit;

bool PerturbationSpec::empty() const {
  return !rotation_override && !rotation_delta && !width_override && !height_override &&
         !format_override;
}

void PerturbationSpec::Validate() const {
  if (rotation_override && rotation_delta)
    throw std::invalid_argument("set either a rotation override or a rotation delta, not both");
  auto check = [](const std::optional<int64_t>& v, const char* name) {
    if (v && (*v < std::numeric_limits<int32_t>::min() || *v > std::numeric_limits<int32_t>::max()))
      throw std::invalid_argument(std::string(name) + " is outside the int32 range");
  };
  check(rotation_override, "rotation override");
  check(rotation_delta, "rotation delta");
  check(width_override, "width override");
  check(height_override, "height override");
  check(format_override, "format override");
  if ((width_override && *width_override <= 0) || (height_override && *height_override <= 0))
    throw std::invalid_argument("width and height overrides must be positive");
}

std::string_view PatchKindName(PatchKind kind) {
  switch (kind) {
    case PatchKind::kRotationConst: return "rotation_const";
    case PatchKind::kRotationStore: return "rotation_store";
    case PatchKind::kDimConstForGetter: return "dim_const_for_getter";
    case PatchKind::kDimConst: return "dim_const";
    case PatchKind::kFormatConst: return "format_const";
  }
  return "?";
}

std::string MarkerDeclaration() {
  return ".field private static synthetic " + std::string(kMarkerField) + ":Z";
}

std::vector<std::string> InjectionPlan::PatchedPaths() const {
  std::vector<std::string> paths;
  for (const auto& p : patches) paths.push_back(p.path);
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  return paths;
}

int64_t RotateDegrees(int64_t current, int64_t delta) {
  return ((current + delta) % 360 + 360) % 360;
}

namespace {

bool Fits(std::string_view opcode, uint32_t flat, int64_t v) {
  auto in = [](int64_t x, int64_t lo, int64_t hi) { return x >= lo && x <= hi; };
  constexpr int64_t kI32Min = std::numeric_limits<int32_t>::min();
  constexpr int64_t kI32Max = std::numeric_limits<int32_t>::max();
  if (opcode == "const/4") return flat < 16 && in(v, -8, 7);
  if (opcode == "const/16") return flat < 256 && in(v, -32768, 32767);
  if (opcode == "const") return flat < 256 && in(v, kI32Min, kI32Max);
  if (opcode == "const/high16")
    return flat < 256 && in(v, kI32Min, kI32Max) && (v & 0xffff) == 0;
  if (opcode == "const-wide/16") return flat < 256 && in(v, -32768, 32767);
  if (opcode == "const-wide/32") return flat < 256 && in(v, kI32Min, kI32Max);
  if (opcode == "const-wide") return flat < 256;
  return false;
}

// Keeps |current| when the value still fits, otherwise the narrowest wider
// form of the same width class.
std::optional<std::string> ConstOpcode(std::string_view current, uint32_t flat, int64_t v) {
  if (!current.empty() && Fits(current, flat, v)) return std::string(current);
  bool wide = current.starts_with("const-wide");
  static constexpr std::array<std::string_view, 3> kNarrow = {"const/4", "const/16", "const"};
  static constexpr std::array<std::string_view, 3> kWide = {"const-wide/16", "const-wide/32",
                                                           "const-wide"};
  for (auto op : wide ? kWide : kNarrow)
    if (Fits(op, flat, v)) return std::string(op);
  return std::nullopt;
}

std::string Indent(const std::string& raw) {
  return raw.substr(0, raw.find_first_not_of(" \t"));
}

std::string ConstLine(const std::string& indent, const std::string& opcode,
                      const smali::Register& reg, Literal lit) {
  return indent + opcode + " " + reg.ToString() + ", " + smali::RenderLiteral(lit);
}

bool InAcceptedSet(int64_t degrees) {
  return degrees == 0 || degrees == 90 || degrees == 180 || degrees == 270;
}

class MatchPlanner {
 public:
  MatchPlanner(const LocatedMatch& located, const PerturbationSpec& spec, InjectionPlan* plan)
      : lm_(located),
        unit_(*located.unit),
        method_(unit_.methods.at(located.match.method_index)),
        spec_(spec),
        plan_(plan) {}

  PlannedMatch Run() {
    const ConstructorMatch& m = lm_.match;
    PlannedMatch out{lm_.path, m.class_name, m.method_signature, m.strategy, 0, {}};
    std::vector<std::string> missing;

    if (spec_.rotation_override || spec_.rotation_delta) {
      if (!PlanRotation()) missing.push_back("rotation");
    }
    if (spec_.width_override && !PlanDimension(Axis::kWidth, *spec_.width_override))
      missing.push_back("width");
    if (spec_.height_override && !PlanDimension(Axis::kHeight, *spec_.height_override))
      missing.push_back("height");
    if (spec_.format_override && !PlanFormat()) missing.push_back("format");

    out.patches = patches_.size();
    size_t requested = (spec_.rotation_override || spec_.rotation_delta) + !!spec_.width_override +
                       !!spec_.height_override + !!spec_.format_override;
    if (!missing.empty()) {
      std::string what;
      for (const auto& s : missing) what += (what.empty() ? "" : ", ") + s;
      if (missing.size() == requested && patches_.empty())
        out.skip_reason = "no applicable site for " + what;
      else
        plan_->warnings.push_back(m.class_name + "->" + m.method_signature +
                                  ": no applicable site for " + what);
    }
    for (auto& p : patches_) plan_->patches.push_back(std::move(p));
    return out;
  }

 private:
  const Instruction& Insn(size_t i) const { return method_.instructions.at(i); }

  Patch Make(size_t insn_index, size_t first_line, size_t last_line, PatchKind kind) {
    Patch p;
    p.path = lm_.path;
    p.class_name = lm_.match.class_name;
    p.method_signature = lm_.match.method_signature;
    p.instruction_index = insn_index;
    p.line_index = first_line;
    for (size_t l = first_line; l <= last_line; ++l) p.original_lines.push_back(unit_.lines[l].text);
    p.kind = kind;
    return p;
  }

  // Rewrites the literal of a const instruction. Returns false when the new
  // value cannot be encoded; true (and no patch) when it is unchanged.
  bool RewriteLiteral(size_t index, int64_t value, PatchKind kind) {
    const Instruction& insn = Insn(index);
    const Literal* lit = insn.LiteralAt(1);
    const smali::Register* reg = insn.RegisterAt(0);
    if (!lit || !reg) return false;
    if (lit->value == value) return true;
    auto opcode = ConstOpcode(insn.opcode, method_.FlatIndex(*reg), value);
    if (!opcode) return false;
    Literal updated = *lit;
    updated.value = value;
    if (insn.opcode == "const/high16" && *opcode != insn.opcode) updated.suffix.clear();
    Patch p = Make(index, insn.line_index, insn.line_index, kind);
    p.replacement_lines = {ConstLine(Indent(insn.raw_text), *opcode, *reg, updated)};
    patches_.push_back(std::move(p));
    return true;
  }

  bool PlanRotation() {
    const auto& sites = lm_.match.rotation_sites;
    if (sites.empty()) return false;
    auto param = std::find_if(sites.begin(), sites.end(),
                              [](const locate::RotationSite& s) { return s.from_parameter; });
    if (param != sites.end()) return PlanRotationStore(*param);

    bool ok = true;
    for (const auto& s : sites) {
      int64_t target = spec_.rotation_override ? *spec_.rotation_override
                                               : RotateDegrees(*s.literal, *spec_.rotation_delta);
      if (!RewriteLiteral(s.instruction_index, target, PatchKind::kRotationConst)) {
        ok = false;
        continue;
      }
      if (target != *s.literal && InAcceptedSet(target)) WarnAccepted(target);
    }
    return ok;
  }

  // The value reaches the store from a parameter on at least one path, so
  // the edit goes right before the store and covers every path.
  bool PlanRotationStore(const locate::RotationSite& site) {
    const Instruction& store = Insn(site.store_index);
    const smali::Register& reg = site.value_register;
    uint32_t flat = method_.FlatIndex(reg);
    std::string indent = Indent(store.raw_text);
    std::vector<std::string> inserted;
    if (spec_.rotation_override) {
      auto opcode = ConstOpcode("", flat, *spec_.rotation_override);
      if (!opcode) return false;
      inserted.push_back(ConstLine(indent, *opcode, reg,
                                   {*spec_.rotation_override, smali::Radix::kHex, ""}));
      if (InAcceptedSet(*spec_.rotation_override)) WarnAccepted(*spec_.rotation_override);
    } else {
      int64_t delta = RotateDegrees(0, *spec_.rotation_delta);
      if (delta == 0) return true;
      if (flat >= 16) return false;  // the lit16 forms take 4-bit registers
      std::string r = reg.ToString();
      inserted.push_back(indent + "add-int/lit16 " + r + ", " + r + ", " +
                         smali::RenderLiteral({delta, smali::Radix::kHex, ""}));
      inserted.push_back(indent + "rem-int/lit16 " + r + ", " + r + ", 0x168");
      if (delta % 90 == 0)
        plan_->warnings.push_back(lm_.match.class_name + "->" + lm_.match.method_signature +
                                  ": a delta of " + std::to_string(delta) +
                                  " keeps right-angle inputs in the accepted set");
    }
    Patch p = Make(site.store_index, store.line_index, store.line_index, PatchKind::kRotationStore);
    p.replacement_lines = inserted;
    p.replacement_lines.push_back(store.raw_text);
    patches_.push_back(std::move(p));
    return true;
  }

  bool PlanDimension(Axis axis, int64_t value) {
    bool any = false;
    bool ok = true;
    for (const auto& d : lm_.match.dimension_sites) {
      if (d.axis != axis) continue;
      any = true;
      if (d.source == DimensionSource::kConst) {
        ok &= RewriteLiteral(d.instruction_index, value, PatchKind::kDimConst);
        continue;
      }
      const Instruction& invoke = Insn(*d.invoke_index);
      const Instruction& result = Insn(d.instruction_index);
      const smali::Register* reg = result.RegisterAt(0);
      auto opcode = reg ? ConstOpcode("", method_.FlatIndex(*reg), value) : std::nullopt;
      if (!opcode) {
        ok = false;
        continue;
      }
      Patch p = Make(*d.invoke_index, invoke.line_index, result.line_index,
                     PatchKind::kDimConstForGetter);
      p.replacement_lines.push_back(
          ConstLine(Indent(invoke.raw_text), *opcode, *reg, {value, smali::Radix::kHex, ""}));
      // Lines between the call and its move-result (blank lines, debug
      // directives) stay as they are.
      for (size_t l = 1; l + 1 < p.original_lines.size(); ++l)
        p.replacement_lines.push_back(p.original_lines[l]);
      patches_.push_back(std::move(p));
    }
    return any && ok;
  }

  bool PlanFormat() {
    const auto& f = lm_.match.format_site;
    if (!f) return false;
    return RewriteLiteral(f->instruction_index, *spec_.format_override, PatchKind::kFormatConst);
  }

  void WarnAccepted(int64_t degrees) {
    plan_->warnings.push_back(lm_.match.class_name + "->" + lm_.match.method_signature +
                              ": injected rotation " + std::to_string(degrees) +
                              " is an accepted orientation; the attack may have no effect");
  }

  const LocatedMatch& lm_;
  const SmaliUnit& unit_;
  const SmaliMethod& method_;
  const PerturbationSpec& spec_;
  InjectionPlan* plan_;
  std::vector<Patch> patches_;
};

}  // namespace

InjectionPlan Plan(std::span<const LocatedMatch> matches, const PerturbationSpec& spec) {
  spec.Validate();
  InjectionPlan plan;
  plan.spec = spec;
  for (const auto& lm : matches) plan.matches.push_back(MatchPlanner(lm, spec, &plan).Run());

  std::stable_sort(plan.patches.begin(), plan.patches.end(), [](const Patch& a, const Patch& b) {
    if (a.path != b.path) return a.path < b.path;
    return a.line_index > b.line_index;
  });
  // One constant can feed two sites; keep the first edit of any line.
  std::vector<Patch> kept;
  for (auto& p : plan.patches) {
    if (!kept.empty() && kept.back().path == p.path &&
        p.line_index + p.original_lines.size() > kept.back().line_index) {
      plan.warnings.push_back(p.path + ": dropped overlapping " +
                              std::string(PatchKindName(p.kind)) + " patch at line " +
                              std::to_string(p.line_index + 1));
      continue;
    }
    kept.push_back(std::move(p));
  }
  plan.patches = std::move(kept);
  for (auto& m : plan.matches)
    m.patches = std::count_if(plan.patches.begin(), plan.patches.end(), [&](const Patch& p) {
      return p.path == m.path && p.class_name == m.class_name &&
             p.method_signature == m.method_signature;
    });
  return plan;
}

}  // namespace dlprep::inject
