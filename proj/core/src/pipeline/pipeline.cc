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

#include "dlprep/pipeline/pipeline.h"

#include <stdlib.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "dlprep/inject/repack.h"
#include "dlprep/scan/zip.h"
#include "dlprep/smali/tree.h"
#include "dlprep/util/parallel.h"
#include "dlprep/util/process.h"

namespace dlprep::pipeline {

namespace fs = std::filesystem;

std::string_view InjectionStatusName(InjectionStatus s) {
  switch (s) {
    case InjectionStatus::kNotAttempted: return "not_attempted";
    case InjectionStatus::kNoCode: return "no_code";
    case InjectionStatus::kNoMatch: return "no_match";
    case InjectionStatus::kNoApplicableSite: return "no_applicable_site";
    case InjectionStatus::kNothingToChange: return "nothing_to_change";
    case InjectionStatus::kPlanned: return "planned";
    case InjectionStatus::kApplied: return "applied";
    case InjectionStatus::kFailed: return "failed";
  }
  return "?";
}

namespace {

constexpr std::string_view kStampFile = ".dlprep-output";

bool IsAppDirectory(const fs::path& dir) {
  std::error_code ec;
  if (fs::exists(dir / "AndroidManifest.xml", ec)) return true;
  for (auto it = fs::directory_iterator(dir, ec); !ec && it != fs::end(it); it.increment(ec))
    if (it->is_directory() && it->path().filename().string().starts_with("smali")) return true;
  return false;
}

std::string BaseName(const std::string& app) {
  fs::path p(app);
  if (!p.has_filename()) p = p.parent_path();
  std::error_code ec;
  std::string name = fs::is_directory(p, ec) ? p.filename().string() : p.stem().string();
  for (char& c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' && c != '-') c = '_';
  if (name.empty() || name[0] == '.') name = "app" + name;
  return name;
}

// A scratch directory removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "dlprep-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("cannot create scratch directory");
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void PrepareOutputDir(const fs::path& out) {
  std::error_code ec;
  if (fs::exists(out, ec)) {
    if (!fs::is_directory(out, ec))
      throw ConfigError("output_dir " + out.string() + " is not a directory");
    bool empty = fs::directory_iterator(out, ec) == fs::directory_iterator();
    if (!empty && !fs::exists(out / kStampFile, ec))
      throw ConfigError("output_dir " + out.string() +
                        " is not empty and was not created by a previous pipeline run");
  }
  fs::create_directories(out);
  std::ofstream(out / kStampFile) << "dlprep pipeline output\n";
}

// Writes every entry of the archive below |dir|. Entries that would land
// outside it are refused.
void ExtractArchive(const fs::path& archive, const fs::path& dir, AppOutcome* out) {
  scan::ZipReader zip = scan::ZipReader::Open(archive);
  for (const auto& e : zip.entries()) {
    if (e.is_directory()) continue;
    fs::path rel = fs::path(e.name).lexically_normal();
    if (rel.is_absolute() || rel.empty() || *rel.begin() == "..")
      throw std::runtime_error("archive entry escapes the output tree: " + e.name);
    if (e.encrypted()) {
      out->warnings.push_back("skipped encrypted entry " + e.name);
      continue;
    }
    fs::path target = dir / rel;
    fs::create_directories(target.parent_path());
    std::ofstream(target, std::ios::binary) << zip.Read(e);
  }
}

bool HasSmaliEntries(const fs::path& archive) {
  scan::ZipReader zip = scan::ZipReader::Open(archive);
  return std::any_of(zip.entries().begin(), zip.entries().end(),
                     [](const scan::ZipEntry& e) { return e.name.ends_with(".smali"); });
}

void RunHook(const std::string& what, const std::string& tmpl,
             const std::map<std::string, std::string>& values) {
  std::string command = util::ExpandTemplate(tmpl, values);
  util::CommandResult r = util::RunShell(command);
  if (r.exit_code != 0)
    throw inject::HookError(inject::HookError::Code::kFailed,
                            what + " hook exited with status " + std::to_string(r.exit_code),
                            r.stderr_text);
}

// Places a smali tree for the app at |tree|. Returns false when there is no
// code to work on.
bool Materialize(const Config& config, const fs::path& tree, AppOutcome* out) {
  fs::path app(out->app);
  std::error_code ec;
  fs::remove_all(tree, ec);
  if (fs::is_directory(app, ec)) {
    fs::copy(app, tree, fs::copy_options::recursive);
    out->code_source = "directory";
  } else if (!config.hooks.disassemble.empty()) {
    fs::create_directories(tree.parent_path());
    RunHook("disassemble", config.hooks.disassemble,
            {{"in", fs::absolute(app).string()}, {"out", fs::absolute(tree).string()}});
    if (!fs::is_directory(tree, ec))
      throw inject::HookError(inject::HookError::Code::kFailed,
                              "disassemble hook did not create " + tree.string());
    out->code_source = "disassembler";
  } else if (HasSmaliEntries(app)) {
    fs::create_directories(tree);
    ExtractArchive(app, tree, out);
    out->code_source = "embedded_smali";
  } else {
    out->error = "archive holds no smali; configure hooks.disassemble (e.g. 'apktool d {in} -o {out}')";
    return false;
  }
  if (!config.hooks.deobfuscate.empty())
    RunHook("deobfuscate", config.hooks.deobfuscate, {{"in", fs::absolute(tree).string()}});
  return true;
}

void ProcessApp(const Config& config, const fs::path& work_root, bool write, AppOutcome* out) {
  fs::path tree = work_root / out->name;
  if (!Materialize(config, tree, out)) {
    out->status = InjectionStatus::kNoCode;
    return;
  }
  smali::TreeLoadResult loaded = smali::LoadSmaliTree(tree);
  for (const auto& e : loaded.errors) out->parse_errors.push_back(e.path + ": " + e.message);
  if (loaded.tree.units().empty()) {
    out->status = InjectionStatus::kNoCode;
    out->error = "no parseable smali files";
    return;
  }
  locate::LocateOptions options = config.locate;
  options.workers = 1;
  out->located = locate::Locate(loaded.tree, options);
  if (out->located.matches.empty()) {
    out->status = InjectionStatus::kNoMatch;
    return;
  }
  out->plan = inject::Plan(out->located.matches, config.perturbation);
  if (out->plan.patches.empty()) {
    bool all_skipped = std::all_of(out->plan.matches.begin(), out->plan.matches.end(),
                                   [](const inject::PlannedMatch& m) { return m.skipped(); });
    out->status = all_skipped ? InjectionStatus::kNoApplicableSite
                              : InjectionStatus::kNothingToChange;
    return;
  }
  if (!write) {
    out->status = InjectionStatus::kPlanned;
    return;
  }
  out->applied = inject::Apply(out->plan, tree);
  out->status = InjectionStatus::kApplied;
  out->work_tree = tree.string();
  if (!config.hooks.repack.empty()) {
    try {
      fs::path artifact = work_root / (out->name + "-injected.apk");
      out->artifact = inject::Repack(tree, artifact, config.hooks.repack).artifact.string();
    } catch (const inject::HookError& e) {
      out->error = e.what();
      if (!e.stderr_text().empty()) out->error += ": " + e.stderr_text();
      out->warnings.push_back("repack failed; the patched tree is left in place");
    }
  }
}

}  // namespace

std::vector<std::string> ExpandInputs(std::span<const std::string> paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) {
    std::error_code ec;
    if (!fs::is_directory(p, ec) || IsAppDirectory(p)) {
      out.push_back(p);
      continue;
    }
    std::vector<std::string> children;
    for (auto it = fs::directory_iterator(p, ec); !ec && it != fs::end(it); it.increment(ec)) {
      std::string name = it->path().filename().string();
      if (name.starts_with(".")) continue;
      if (it->is_regular_file() || (it->is_directory() && IsAppDirectory(it->path())))
        children.push_back(it->path().string());
    }
    std::sort(children.begin(), children.end());
    out.insert(out.end(), children.begin(), children.end());
  }
  return out;
}

PipelineReport RunPipeline(std::span<const std::string> paths, const Config& config) {
  PipelineReport report;
  report.config = config;
  std::vector<std::string> apps = ExpandInputs(paths);
  report.apps.resize(apps.size());

  std::map<std::string, int> used;
  for (size_t i = 0; i < apps.size(); ++i) {
    AppOutcome& o = report.apps[i];
    o.app = apps[i];
    std::string base = BaseName(apps[i]);
    int n = ++used[base];
    o.name = n == 1 ? base : base + "-" + std::to_string(n);
  }

  bool write = !config.output_dir.empty();
  std::optional<ScratchDir> scratch;
  fs::path work_root;
  if (write) {
    work_root = config.output_dir;
    if (!apps.empty()) PrepareOutputDir(work_root);
  } else if (!apps.empty()) {
    scratch.emplace();
    work_root = scratch->path();
  }

  util::ParallelFor(apps.size(), config.workers, [&](size_t i) {
    AppOutcome& o = report.apps[i];
    o.verdict = scan::ScanPath(o.app, config.scan);
    if (!o.verdict.is_dl_app) return;
    try {
      ProcessApp(config, work_root, write, &o);
    } catch (const inject::ApplyError& e) {
      o.status = InjectionStatus::kFailed;
      o.error = e.what();
      o.internal_error = e.code() == inject::ApplyError::Code::kIo;
    } catch (const inject::HookError& e) {
      o.status = o.code_source.empty() ? InjectionStatus::kNoCode : InjectionStatus::kFailed;
      o.error = e.what();
      if (!e.stderr_text().empty()) o.error += ": " + e.stderr_text();
    } catch (const std::exception& e) {
      o.status = InjectionStatus::kFailed;
      o.error = e.what();
      o.internal_error = true;
    }
    // Scratch trees are not part of the result.
    if (!write) {
      std::error_code ec;
      fs::remove_all(work_root / o.name, ec);
    }
  });

  std::vector<scan::DlVerdict> verdicts;
  size_t matched = 0, injected = 0;
  for (const auto& o : report.apps) {
    verdicts.push_back(o.verdict);
    matched += o.matched();
    injected += o.injected();
  }
  report.stats = scan::Aggregate(verdicts);
  scan::RecordInjection(&report.stats, matched, injected);
  return report;
}

int ExitCode(const PipelineReport& report) {
  bool any_match = false;
  for (const auto& o : report.apps) {
    if (o.internal_error) return 5;
    any_match |= o.matched();
  }
  return report.apps.empty() || any_match ? 0 : 2;
}

}  // namespace dlprep::pipeline
