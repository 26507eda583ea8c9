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

#include "dlprep/locate/slice.h"

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <tuple>

#include "dlprep/locate/dataflow.h"

namespace dlprep::locate {

using smali::Instruction;
using smali::MethodRef;
using smali::OpFamily;
using smali::SmaliMethod;
using smali::SmaliUnit;

std::string_view CreationApiName(CreationApi api) {
  switch (api) {
    case CreationApi::kCreateBitmap: return "createBitmap";
    case CreationApi::kCreateScaledBitmap: return "createScaledBitmap";
    case CreationApi::kDecodeResource: return "decodeResource";
    case CreationApi::kOtherFactory: return "other-factory";
  }
  return "other-factory";
}

namespace {

constexpr std::string_view kBitmap = "Landroid/graphics/Bitmap;";
constexpr std::string_view kBitmapFactory = "Landroid/graphics/BitmapFactory;";

std::optional<CreationApi> ClassifyCreation(const MethodRef& ref) {
  if (!ref.owner_class.starts_with("Landroid/")) return std::nullopt;
  if (ref.method_name == "createBitmap") return CreationApi::kCreateBitmap;
  if (ref.method_name == "createScaledBitmap") return CreationApi::kCreateScaledBitmap;
  if (ref.method_name == "decodeResource") return CreationApi::kDecodeResource;
  if ((ref.owner_class == kBitmap || ref.owner_class == kBitmapFactory) &&
      ref.return_type == kBitmap)
    return CreationApi::kOtherFactory;
  return std::nullopt;
}

bool IsFrameExtraction(const MethodRef& ref) {
  return ref.owner_class == "Landroid/media/MediaMetadataRetriever;" &&
         ref.method_name.starts_with("get") &&
         ref.method_name.find("Frame") != std::string::npos;
}

// First non-receiver argument of an invoke.
std::optional<smali::Register> InputArgument(const Instruction& insn) {
  const auto* list = insn.RegisterListAt(0);
  if (!list) return std::nullopt;
  auto regs = ExpandRegisters(*list);
  size_t first = insn.opcode.starts_with("invoke-static") ? 0 : 1;
  if (regs.size() <= first) return std::nullopt;
  return regs[first];
}

bool OwnerMatches(const std::string& owner, const std::vector<std::string>& prefixes) {
  for (const auto& p : prefixes)
    if (owner.starts_with(p)) return true;
  return false;
}

}  // namespace

std::vector<SliceAnchor> FindAnchors(const SmaliUnit& unit,
                                     const AnchorOptions& options) {
  std::vector<SliceAnchor> anchors;
  for (size_t m = 0; m < unit.methods.size(); ++m) {
    const SmaliMethod& method = unit.methods[m];
    for (size_t i = 0; i < method.instructions.size(); ++i) {
      const Instruction& insn = method.instructions[i];
      if (insn.family != OpFamily::kInvoke) continue;
      const MethodRef* ref = insn.MethodAt(1);
      if (!ref || !options.inference_names.contains(ref->method_name)) continue;
      if (!OwnerMatches(ref->owner_class, options.owner_prefixes)) continue;
      auto arg = InputArgument(insn);
      if (!arg) continue;
      anchors.push_back({unit.class_name, m, method.Signature(), i,
                         insn.line_index, *arg, ref->ToString()});
    }
  }
  return anchors;
}

namespace {

// Caller context for a walk that descended into a static factory.
struct Frame {
  const SmaliUnit* unit;
  size_t method;
  size_t invoke_index;
  std::vector<uint32_t> arg_flats;  // caller registers, one per parameter word
  int depth;
  std::shared_ptr<const Frame> parent;
};

struct Query {
  const SmaliUnit* unit;
  size_t method;
  size_t point;
  uint32_t reg;
  int depth;
  std::shared_ptr<const Frame> frame;
};

class Slicer {
 public:
  explicit Slicer(const smali::SmaliTree& tree) : tree_(tree) {}

  SliceResult Run(const SmaliUnit& unit, const SliceAnchor& anchor, int depth) {
    const SmaliMethod& method = unit.methods.at(anchor.method_index);
    Enqueue({&unit, anchor.method_index, anchor.call_site,
             method.FlatIndex(anchor.traced_register), depth, nullptr});
    while (!work_.empty()) {
      Query q = std::move(work_.front());
      work_.pop_front();
      Step(q);
    }
    return std::move(result_);
  }

 private:
  const MethodFlow& FlowFor(const SmaliUnit* unit, size_t method) {
    auto key = std::make_pair(unit, method);
    auto it = flows_.find(key);
    if (it == flows_.end())
      it = flows_.emplace(key, std::make_unique<MethodFlow>(unit->methods[method])).first;
    return *it->second;
  }

  void Enqueue(Query q) {
    auto key = std::make_tuple(q.unit, q.method, q.point, q.reg, q.frame.get());
    if (!seen_.insert(key).second) return;
    work_.push_back(std::move(q));
  }

  static std::string RegisterName(const SmaliMethod& m, uint32_t flat) {
    if (auto slot = m.ParamSlot(flat)) return "p" + std::to_string(*slot);
    return "v" + std::to_string(flat);
  }

  void Gap(const Query& q, size_t index, const std::string& reason) {
    const SmaliMethod& m = q.unit->methods[q.method];
    SliceGap gap{q.unit->class_name, m.Signature(), index, RegisterName(m, q.reg), reason};
    for (const auto& g : result_.gaps)
      if (g == gap) return;
    result_.gaps.push_back(std::move(gap));
  }

  void Site(const Query& q, size_t index, CreationApi api, const MethodRef& ref) {
    const SmaliMethod& m = q.unit->methods[q.method];
    CreationSite site{q.unit->class_name, m.Signature(), index,
                      m.instructions[index].line_index, api, ref.ToString()};
    for (const auto& s : result_.sites)
      if (s == site) return;
    result_.sites.push_back(std::move(site));
  }

  void Step(const Query& q) {
    const MethodFlow& flow = FlowFor(q.unit, q.method);
    const SmaliMethod& m = q.unit->methods[q.method];
    for (size_t def : flow.ReachingDefs(q.point, q.reg)) {
      if (def == MethodFlow::kEntry) {
        FollowEntry(q);
        continue;
      }
      const Instruction& insn = m.instructions[def];
      switch (insn.family) {
        case OpFamily::kMove:
          Enqueue({q.unit, q.method, def, flow.Flat(*insn.RegisterAt(1)), q.depth, q.frame});
          break;
        case OpFamily::kCheckCast:
          Enqueue({q.unit, q.method, def, q.reg, q.depth, q.frame});
          break;
        case OpFamily::kMoveResult:
          FollowResult(q, def);
          break;
        case OpFamily::kNewInstance:
          FollowConstruction(q, def);
          break;
        case OpFamily::kConst:
        case OpFamily::kConstString:
        case OpFamily::kConstClass:
          break;
        case OpFamily::kInstanceGet:
        case OpFamily::kStaticGet:
          Gap(q, def, "defined by field load " + insn.FieldAt(insn.family == OpFamily::kInstanceGet ? 2 : 1)->ToString());
          break;
        default:
          Gap(q, def, "defined by unsupported opcode " + insn.opcode);
          break;
      }
    }
  }

  void FollowEntry(const Query& q) {
    const SmaliMethod& m = q.unit->methods[q.method];
    auto slot = m.ParamSlot(q.reg);
    if (!slot) {
      Gap(q, 0, "register undefined on entry");
      return;
    }
    if (!q.frame) {
      Gap(q, 0, "parameter leaves method scope");
      return;
    }
    const Frame& f = *q.frame;
    if (*slot >= f.arg_flats.size()) {
      Gap(q, 0, "parameter has no matching call argument");
      return;
    }
    Enqueue({f.unit, f.method, f.invoke_index, f.arg_flats[*slot], f.depth, f.parent});
  }

  void FollowResult(const Query& q, size_t def) {
    const SmaliMethod& m = q.unit->methods[q.method];
    if (def == 0) {
      Gap(q, def, "move-result without a producing call");
      return;
    }
    size_t call = def - 1;
    const Instruction& insn = m.instructions[call];
    if (insn.family != OpFamily::kInvoke) {
      Gap(q, call, "result of " + insn.opcode);
      return;
    }
    const MethodRef& ref = *insn.MethodAt(1);
    if (auto api = ClassifyCreation(ref)) {
      Site(q, call, *api, ref);
      return;
    }
    if (IsFrameExtraction(ref)) {
      Gap(q, call, "video frame extraction is not pre-processing: " + ref.ToString());
      return;
    }
    if (q.depth > 0 && insn.opcode.starts_with("invoke-static")) {
      if (const auto* callee_unit = tree_.FindClass(ref.owner_class)) {
        const SmaliUnit* cu = callee_unit->unit.get();
        std::string sig = ref.Signature();
        for (size_t k = 0; k < cu->methods.size(); ++k) {
          const SmaliMethod& callee = cu->methods[k];
          if (callee.Signature() != sig || callee.instructions.empty()) continue;
          auto frame = std::make_shared<Frame>();
          frame->unit = q.unit;
          frame->method = q.method;
          frame->invoke_index = call;
          for (const auto& r : ExpandRegisters(*insn.RegisterListAt(0)))
            frame->arg_flats.push_back(m.FlatIndex(r));
          frame->depth = q.depth;
          frame->parent = q.frame;
          for (size_t i = 0; i < callee.instructions.size(); ++i) {
            const Instruction& ret = callee.instructions[i];
            if (ret.family != OpFamily::kReturn || !ret.RegisterAt(0)) continue;
            Enqueue({cu, k, i, callee.FlatIndex(*ret.RegisterAt(0)), q.depth - 1, frame});
          }
          return;
        }
      }
    }
    Gap(q, call, "opaque call " + ref.ToString());
  }

  void FollowConstruction(const Query& q, size_t def) {
    const SmaliMethod& m = q.unit->methods[q.method];
    const MethodFlow& flow = FlowFor(q.unit, q.method);
    for (size_t i = def + 1; i < m.instructions.size(); ++i) {
      const Instruction& insn = m.instructions[i];
      if (insn.family != OpFamily::kInvoke || !insn.opcode.starts_with("invoke-direct"))
        continue;
      const MethodRef* ref = insn.MethodAt(1);
      auto regs = ExpandRegisters(*insn.RegisterListAt(0));
      if (!ref || ref->method_name != "<init>" || regs.empty() ||
          flow.Flat(regs[0]) != q.reg)
        continue;
      for (size_t k = 1; k < regs.size(); ++k)
        Enqueue({q.unit, q.method, i, flow.Flat(regs[k]), q.depth, q.frame});
      return;
    }
    Gap(q, def, "allocation without constructor call");
  }

  const smali::SmaliTree& tree_;
  std::map<std::pair<const SmaliUnit*, size_t>, std::unique_ptr<MethodFlow>> flows_;
  std::set<std::tuple<const SmaliUnit*, size_t, size_t, uint32_t, const Frame*>> seen_;
  std::deque<Query> work_;
  SliceResult result_;
};

}  // namespace

SliceResult BackwardSlice(const smali::SmaliTree& tree, const SmaliUnit& unit,
                          const SliceAnchor& anchor, int call_depth) {
  if (anchor.method_index >= unit.methods.size() ||
      anchor.call_site >= unit.methods[anchor.method_index].instructions.size())
    return {};
  return Slicer(tree).Run(unit, anchor, call_depth < 0 ? 0 : call_depth);
}

}  // namespace dlprep::locate
