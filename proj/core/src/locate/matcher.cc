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

#include "dlprep/locate/matcher.h"

#include <algorithm>

#include "dlprep/locate/dataflow.h"

namespace dlprep::locate {

using smali::Instruction;
using smali::OpFamily;
using smali::SmaliMethod;
using smali::SmaliUnit;

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kBufferImage: return "S1_buffer";
    case Strategy::kBitmapImage: return "S2_bitmap";
    case Strategy::kMediaImage: return "S3_media_image";
  }
  return "?";
}

std::string_view DimensionSourceName(DimensionSource s) {
  switch (s) {
    case DimensionSource::kGetWidth: return "getWidth";
    case DimensionSource::kGetHeight: return "getHeight";
    case DimensionSource::kConst: return "const";
  }
  return "?";
}

namespace {

// An int store into a field declared on the class being matched.
struct FieldStore {
  size_t index;
  smali::Register value;
  std::string field;
  std::vector<size_t> defs;  // reaching definitions of |value|
};

struct Getter {
  size_t invoke_index;
  size_t result_index;  // the move-result right after it
  DimensionSource source;
};

class ConstructorAnalysis {
 public:
  ConstructorAnalysis(const SmaliUnit& unit, const SmaliMethod& method)
      : unit_(unit), method_(method), flow_(method) {
    for (size_t i = 0; i < method.instructions.size(); ++i) {
      const Instruction& insn = method.instructions[i];
      if (insn.opcode == "iput") {
        const auto* value = insn.RegisterAt(0);
        const auto* field = insn.FieldAt(2);
        if (value && field && field->owner_class == unit.class_name &&
            field->field_type == "I")
          stores_.push_back({i, *value, field->field_name,
                             flow_.ReachingDefs(i, flow_.Flat(*value))});
      }
      if (insn.family == OpFamily::kConstString) has_string_ = true;
      if (insn.family == OpFamily::kConstString) {
        if (const auto* s = std::get_if<smali::StringLiteral>(&insn.operands[1]))
          strings_.push_back(s->escaped);
      }
      if (insn.family == OpFamily::kInvoke) CollectGetter(i, insn);
    }
  }

  const Instruction& At(size_t i) const { return method_.instructions[i]; }

  // Const definition feeding |store| with literal |value|, if any.
  std::optional<size_t> ConstFeeding(const FieldStore& store, int64_t value) const {
    for (size_t d : store.defs) {
      if (d == MethodFlow::kEntry) continue;
      const Instruction& def = At(d);
      if (def.family == OpFamily::kConst && def.LiteralAt(1) &&
          def.LiteralAt(1)->value == value)
        return d;
    }
    return std::nullopt;
  }

  // First store of any of |values|; returns (store position, const index).
  std::optional<std::pair<size_t, size_t>> StoreOfLiteral(
      std::initializer_list<int64_t> values) const {
    for (size_t s = 0; s < stores_.size(); ++s)
      for (int64_t v : values)
        if (auto c = ConstFeeding(stores_[s], v)) return std::make_pair(s, *c);
    return std::nullopt;
  }

  bool HasString(const std::vector<std::string>& allowlist) const {
    if (allowlist.empty()) return has_string_;
    for (const auto& s : strings_)
      if (std::find(allowlist.begin(), allowlist.end(), s) != allowlist.end())
        return true;
    return false;
  }

  bool HasGetter(DimensionSource source) const {
    return std::any_of(getters_.begin(), getters_.end(),
                       [&](const Getter& g) { return g.source == source; });
  }

  bool ReferencesType(const std::string& descriptor) const {
    for (const auto& p : method_.param_types)
      if (p == descriptor) return true;
    for (const auto& insn : method_.instructions) {
      for (const auto& op : insn.operands) {
        if (const auto* t = std::get_if<smali::TypeRef>(&op)) {
          if (t->descriptor == descriptor) return true;
        } else if (const auto* f = std::get_if<smali::FieldRef>(&op)) {
          if (f->owner_class == descriptor || f->field_type == descriptor) return true;
        } else if (const auto* m = std::get_if<smali::MethodRef>(&op)) {
          if (m->owner_class == descriptor || m->return_type == descriptor ||
              std::find(m->param_types.begin(), m->param_types.end(), descriptor) !=
                  m->param_types.end())
            return true;
        }
      }
    }
    return false;
  }

  void Recover(ConstructorMatch* match, size_t format_store, size_t format_const) {
    match->format_site = FormatSite{format_const, At(format_const).LiteralAt(1)->value,
                                    stores_[format_store].index};
    std::vector<size_t> remaining;
    for (size_t s = 0; s < stores_.size(); ++s) {
      if (s == format_store || stores_[s].field == stores_[format_store].field) continue;
      if (auto g = GetterFeeding(stores_[s])) {
        match->dimension_sites.push_back(
            {g->result_index, g->source,
             g->source == DimensionSource::kGetWidth ? Axis::kWidth : Axis::kHeight,
             g->invoke_index, std::nullopt, stores_[s].index});
        continue;
      }
      remaining.push_back(s);
    }

    std::optional<size_t> rotation;
    if (match->strategy == Strategy::kBitmapImage) {
      if (!remaining.empty()) rotation = remaining.back();
    } else if (remaining.size() >= 3) {
      AddConstDimension(match, stores_[remaining[0]], Axis::kWidth);
      AddConstDimension(match, stores_[remaining[1]], Axis::kHeight);
      rotation = remaining[2];
    }
    if (rotation) {
      const FieldStore& store = stores_[*rotation];
      for (size_t d : store.defs) {
        if (d == MethodFlow::kEntry) {
          if (method_.ParamSlot(flow_.Flat(store.value)))
            match->rotation_sites.push_back(
                {store.index, std::nullopt, true, store.index, store.value});
          continue;
        }
        const Instruction& def = At(d);
        if (def.family == OpFamily::kConst && def.LiteralAt(1))
          match->rotation_sites.push_back(
              {d, def.LiteralAt(1)->value, false, store.index, store.value});
      }
    }
  }

 private:
  void CollectGetter(size_t i, const Instruction& insn) {
    if (!insn.opcode.starts_with("invoke-virtual")) return;
    const auto* ref = insn.MethodAt(1);
    if (!ref || !ref->owner_class.starts_with("Landroid/") || ref->return_type != "I" ||
        !ref->param_types.empty())
      return;
    DimensionSource source;
    if (ref->method_name == "getWidth") source = DimensionSource::kGetWidth;
    else if (ref->method_name == "getHeight") source = DimensionSource::kGetHeight;
    else return;
    auto regs = ExpandRegisters(*insn.RegisterListAt(0));
    if (regs.empty()) return;
    // Receiver must be a parameter (not the receiver of the constructor) as
    // it arrived on entry.
    uint32_t flat = flow_.Flat(regs[0]);
    auto slot = method_.ParamSlot(flat);
    if (!slot || (!method_.is_static && *slot == 0)) return;
    auto defs = flow_.ReachingDefs(i, flat);
    if (defs.size() != 1 || defs[0] != MethodFlow::kEntry) return;
    if (i + 1 >= method_.instructions.size() ||
        At(i + 1).family != OpFamily::kMoveResult)
      return;
    getters_.push_back({i, i + 1, source});
  }

  std::optional<Getter> GetterFeeding(const FieldStore& store) const {
    for (size_t d : store.defs)
      for (const auto& g : getters_)
        if (g.result_index == d) return g;
    return std::nullopt;
  }

  void AddConstDimension(ConstructorMatch* match, const FieldStore& store, Axis axis) {
    for (size_t d : store.defs) {
      if (d == MethodFlow::kEntry) continue;
      const Instruction& def = At(d);
      if (def.family == OpFamily::kConst && def.LiteralAt(1))
        match->dimension_sites.push_back({d, DimensionSource::kConst, axis,
                                          std::nullopt, def.LiteralAt(1)->value,
                                          store.index});
    }
  }

  const SmaliUnit& unit_;
  const SmaliMethod& method_;
  MethodFlow flow_;
  std::vector<FieldStore> stores_;
  std::vector<Getter> getters_;
  std::vector<std::string> strings_;
  bool has_string_ = false;
};

}  // namespace

std::vector<ConstructorMatch> MatchConstructors(const SmaliUnit& unit,
                                                const MatcherOptions& options) {
  std::vector<ConstructorMatch> matches;
  for (size_t m = 0; m < unit.methods.size(); ++m) {
    const SmaliMethod& method = unit.methods[m];
    if (!method.is_constructor || method.instructions.empty()) continue;
    ConstructorAnalysis analysis(unit, method);

    std::optional<Strategy> strategy;
    std::optional<std::pair<size_t, size_t>> format;
    if (options.enable_buffer) {
      format = analysis.StoreOfLiteral({kFormatYv12, kFormatNv21});
      if (format && analysis.HasString(options.buffer_string_allowlist))
        strategy = Strategy::kBufferImage;
    }
    if (!strategy && options.enable_bitmap) {
      format = analysis.StoreOfLiteral({kFormatBitmap});
      if (format && analysis.HasGetter(DimensionSource::kGetWidth) &&
          analysis.HasGetter(DimensionSource::kGetHeight))
        strategy = Strategy::kBitmapImage;
    }
    if (!strategy && options.enable_media) {
      format = analysis.StoreOfLiteral({kFormatYuv420});
      if (format && analysis.ReferencesType(options.matrix_descriptor))
        strategy = Strategy::kMediaImage;
    }
    if (!strategy) continue;

    ConstructorMatch match;
    match.strategy = *strategy;
    match.class_name = unit.class_name;
    match.method_signature = method.Signature();
    match.method_index = m;
    analysis.Recover(&match, format->first, format->second);
    matches.push_back(std::move(match));
  }
  return matches;
}

}  // namespace dlprep::locate
