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

#include "dlprep/pipeline/report.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dlprep::pipeline {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

json Envelope(const std::string& kind, const Config& config) {
  return {{"kind", kind}, {"schema_version", kSchemaVersion}, {"config", ConfigToJson(config)}};
}

json Optional(const std::optional<int64_t>& v) { return v ? json(*v) : json(nullptr); }

size_t LineOf(const locate::LocatedMatch& m, size_t instruction) {
  return m.unit->methods[m.match.method_index].instructions[instruction].line_index + 1;
}

json SizeJson(sim::SizePair s) { return {{"width", s.width}, {"height", s.height}}; }

}  // namespace

json VerdictToJson(const scan::DlVerdict& v) {
  json models = json::array();
  for (const auto& m : v.model_files) models.push_back({{"path", m.path}, {"suffix", m.suffix}});
  json refs = json::array();
  for (const auto& r : v.tflite_api_refs) refs.push_back({{"file", r.file}, {"prefix", r.prefix}});
  json services = json::array();
  for (const auto& s : v.mlkit_services)
    services.push_back({{"service", s.Name()}, {"registrar", s.registrar}});
  return {
      {"path", v.app},
      {"verdict", scan::CategoryName(v.category)},
      {"is_dl_app", v.is_dl_app},
      {"uses_mlkit", v.UsesMlkit()},
      {"evidence", v.reasons},
      {"model_files", models},
      {"api_refs", refs},
      {"mlkit_services", services},
      {"warnings", v.warnings},
      {"error", v.error},
      {"obfuscation", {{"short_class_names", v.short_class_names},
                       {"smali_classes", v.smali_classes}}},
  };
}

json StatsToJson(const scan::CorpusStats& s) {
  json services = json::array();
  for (const auto& c : s.services)
    services.push_back({{"service", c.service}, {"apps", c.apps}, {"percent", c.percent.ToString()}});
  json out = {
      {"total_apps", s.total_apps},
      {"unscannable_apps", s.unscannable_apps},
      {"scanned_apps", s.scanned_apps},
      {"dl_apps", s.dl_apps},
      {"non_dl_apps", s.non_dl_apps},
      {"mlkit_dl_apps", s.mlkit_dl_apps},
      {"services", services},
      {"percentages_defined", s.percentages_defined},
  };
  if (s.matched_apps) {
    out["matched_apps"] = *s.matched_apps;
    out["injectable_apps"] = *s.injectable_apps;
    out["injectable_percent"] = s.injectable_percent->ToString();
    out["injectable_of_matched_percent"] = s.injectable_of_matched_percent->ToString();
  }
  return out;
}

json MatchToJson(const locate::LocatedMatch& m) {
  const auto& cm = m.match;
  json rotation = json::array();
  for (const auto& r : cm.rotation_sites)
    rotation.push_back({{"line", LineOf(m, r.instruction_index)},
                        {"literal", Optional(r.literal)},
                        {"from_parameter", r.from_parameter},
                        {"store_line", LineOf(m, r.store_index)}});
  json dims = json::array();
  for (const auto& d : cm.dimension_sites)
    dims.push_back({{"line", LineOf(m, d.instruction_index)},
                    {"source", locate::DimensionSourceName(d.source)},
                    {"axis", d.axis == locate::Axis::kWidth ? "width" : "height"},
                    {"literal", Optional(d.literal)},
                    {"store_line", LineOf(m, d.store_index)}});
  json format = nullptr;
  if (cm.format_site)
    format = {{"line", LineOf(m, cm.format_site->instruction_index)},
              {"literal", cm.format_site->literal},
              {"store_line", LineOf(m, cm.format_site->store_index)}};
  return {
      {"file", m.path},
      {"class", cm.class_name},
      {"method", cm.method_signature},
      {"method_line", m.unit->methods[cm.method_index].header_line + 1},
      {"strategy", locate::StrategyName(cm.strategy)},
      {"rotation_sites", rotation},
      {"dimension_sites", dims},
      {"format_site", format},
  };
}

json SliceToJson(const locate::AnchorSlice& s) {
  json sites = json::array();
  for (const auto& c : s.slice.sites)
    sites.push_back({{"class", c.class_name},
                     {"method", c.method_signature},
                     {"line", c.line_index + 1},
                     {"api", locate::CreationApiName(c.api)},
                     {"callee", c.callee}});
  json gaps = json::array();
  for (const auto& g : s.slice.gaps)
    gaps.push_back({{"class", g.class_name},
                    {"method", g.method_signature},
                    {"instruction", g.instruction_index},
                    {"register", g.register_name},
                    {"reason", g.reason}});
  return {
      {"file", s.path},
      {"class", s.anchor.class_name},
      {"method", s.anchor.method_signature},
      {"line", s.anchor.line_index + 1},
      {"callee", s.anchor.callee},
      {"traced_register", s.anchor.traced_register.ToString()},
      {"creation_sites", sites},
      {"gaps", gaps},
  };
}

json PlanToJson(const inject::InjectionPlan& plan) {
  json matches = json::array();
  for (const auto& m : plan.matches)
    matches.push_back({{"file", m.path},
                       {"class", m.class_name},
                       {"method", m.method_signature},
                       {"strategy", locate::StrategyName(m.strategy)},
                       {"patches", m.patches},
                       {"skip_reason", m.skip_reason}});
  json patches = json::array();
  for (const auto& p : plan.patches)
    patches.push_back({{"file", p.path},
                       {"class", p.class_name},
                       {"method", p.method_signature},
                       {"line", p.line_index + 1},
                       {"kind", inject::PatchKindName(p.kind)},
                       {"original", p.original_lines},
                       {"replacement", p.replacement_lines}});
  return {{"spec", PerturbationToJson(plan.spec)},
          {"matches", matches},
          {"patches", patches},
          {"warnings", plan.warnings}};
}

json SimResultToJson(const sim::SimResult& r, bool include_cases) {
  json out = {{"detected", r.detected},
              {"total", r.total},
              {"detection_rate", r.detection_rate},
              {"latency_proxy", r.latency_proxy}};
  if (!r.cases.empty()) out["target"] = SizeJson(r.cases.front().target);
  if (include_cases) {
    json cases = json::array();
    for (const auto& c : r.cases)
      cases.push_back({{"index", c.index},
                       {"rotation", c.rotation},
                       {"detected", c.detection.detected},
                       {"score", c.detection.score},
                       {"ops", c.ops}});
    out["cases"] = cases;
  }
  return out;
}

json ScanReportJson(std::span<const scan::DlVerdict> verdicts, const scan::CorpusStats& stats,
                    const Config& config) {
  json out = Envelope("scan", config);
  json apps = json::array();
  for (const auto& v : verdicts) apps.push_back(VerdictToJson(v));
  out["apps"] = apps;
  out["stats"] = StatsToJson(stats);
  return out;
}

json LocateReportJson(const std::string& tree, const locate::LocateReport& located,
                      const std::vector<std::string>& parse_errors, const Config& config) {
  json out = Envelope("locate", config);
  out["tree"] = tree;
  json matches = json::array();
  for (const auto& m : located.matches) matches.push_back(MatchToJson(m));
  json slices = json::array();
  for (const auto& s : located.slices) slices.push_back(SliceToJson(s));
  out["matches"] = matches;
  out["slices"] = slices;
  out["parse_errors"] = parse_errors;
  return out;
}

json InjectReportJson(const InjectSummary& s, const Config& config) {
  json out = Envelope("inject", config);
  out["tree"] = s.tree;
  out["dry_run"] = s.dry_run;
  out["plan"] = PlanToJson(s.plan);
  out["files_written"] = s.applied ? json(s.applied->files_written) : json::array();
  out["artifact"] = s.artifact;
  return out;
}

json SimulateReportJson(const sim::ExperimentResult& result, const inject::PerturbationSpec& spec,
                        std::span<const SweepPoint> sweep, const Config& config,
                        bool include_cases) {
  json out = Envelope("simulate", config);
  out["perturbation"] = PerturbationToJson(spec);
  out["baseline"] = SimResultToJson(result.baseline, include_cases);
  out["perturbed"] = SimResultToJson(result.perturbed, include_cases);
  json points = json::array();
  for (const auto& p : sweep)
    points.push_back({{"target", SizeJson(p.target)},
                      {"detection_rate", p.result.detection_rate},
                      {"latency_proxy", p.result.latency_proxy}});
  out["size_sweep"] = points;
  return out;
}

json PipelineReportJson(const PipelineReport& report) {
  json out = Envelope("pipeline", report.config);
  json apps = json::array();
  for (const auto& o : report.apps) {
    json matches = json::array();
    for (const auto& m : o.located.matches) matches.push_back(MatchToJson(m));
    json app = {
        {"path", o.app},
        {"name", o.name},
        {"scan", VerdictToJson(o.verdict)},
        {"code_source", o.code_source},
        {"work_tree", o.work_tree},
        {"parse_errors", o.parse_errors},
        {"anchors", o.located.slices.size()},
        {"matches", matches},
        {"injection", InjectionStatusName(o.status)},
        {"patches", o.plan.patches.size()},
        {"files_written", o.applied ? json(o.applied->files_written) : json::array()},
        {"artifact", o.artifact},
        {"error", o.error},
        {"internal_error", o.internal_error},
        {"warnings", o.warnings},
        {"plan_warnings", o.plan.warnings},
    };
    apps.push_back(std::move(app));
  }
  out["apps"] = apps;
  out["stats"] = StatsToJson(report.stats);
  out["exit_code"] = ExitCode(report);
  return out;
}

std::string DumpReport(const json& report) { return report.dump(2) + "\n"; }

namespace {

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void Add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string Render() const {
    std::vector<size_t> width;
    for (const auto& r : rows_) {
      width.resize(std::max(width.size(), r.size()));
      for (size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream out;
    for (const auto& r : rows_) {
      std::string line;
      for (size_t i = 0; i < r.size(); ++i) {
        line += r[i];
        if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
      }
      out << line << "\n";
    }
    return out.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string Str(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string Join(const json& array, const std::string& key, const char* sep = ";") {
  std::string out;
  for (const auto& e : array) {
    if (!out.empty()) out += sep;
    out += Str(key.empty() ? e : e.at(key));
  }
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvRow(const std::vector<std::string>& fields) {
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + CsvField(fields[i]);
  return line + "\n";
}

std::string Strategies(const json& matches) { return Join(matches, "strategy"); }

std::string StatsTable(const json& s) {
  std::ostringstream out;
  out << "apps: " << s.at("total_apps") << " total, " << s.at("unscannable_apps")
      << " unscannable, " << s.at("dl_apps") << " DL, " << s.at("non_dl_apps") << " non-DL, "
      << s.at("mlkit_dl_apps") << " MLKit DL\n";
  for (const auto& c : s.at("services"))
    out << "  " << Str(c.at("service")) << ": " << c.at("apps") << " (" << Str(c.at("percent"))
        << "%)\n";
  if (s.contains("injectable_apps"))
    out << "injectable: " << s.at("injectable_apps") << "/" << s.at("mlkit_dl_apps")
        << " MLKit DL apps (" << Str(s.at("injectable_percent")) << "%), "
        << s.at("injectable_apps") << "/" << s.at("matched_apps") << " matched ("
        << Str(s.at("injectable_of_matched_percent")) << "%)\n";
  return out.str();
}

std::string SiteLines(const json& sites) { return Join(sites, "line", ","); }

const std::string& Kind(const json& report) {
  if (!report.is_object() || !report.contains("kind") || !report["kind"].is_string())
    throw std::invalid_argument("not a dlprep report (no \"kind\")");
  return report["kind"].get_ref<const std::string&>();
}

}  // namespace

std::string RenderTable(const json& report) {
  const std::string& kind = Kind(report);
  if (kind == "scan") {
    Table t({"APP", "VERDICT", "MLKIT", "EVIDENCE"});
    for (const auto& a : report.at("apps"))
      t.Add({Str(a.at("path")), Str(a.at("verdict")), Join(a.at("mlkit_services"), "service"),
             std::to_string(a.at("evidence").size())});
    return t.Render() + "\n" + StatsTable(report.at("stats"));
  }
  if (kind == "pipeline") {
    Table t({"APP", "VERDICT", "MLKIT", "MATCHES", "STRATEGIES", "PATCHES", "INJECTION"});
    for (const auto& a : report.at("apps"))
      t.Add({Str(a.at("path")), Str(a.at("scan").at("verdict")),
             Join(a.at("scan").at("mlkit_services"), "service"),
             std::to_string(a.at("matches").size()), Strategies(a.at("matches")),
             Str(a.at("patches")), Str(a.at("injection"))});
    return t.Render() + "\n" + StatsTable(report.at("stats"));
  }
  if (kind == "locate") {
    Table t({"FILE", "METHOD", "STRATEGY", "FORMAT", "ROTATION", "DIMENSIONS"});
    for (const auto& m : report.at("matches"))
      t.Add({Str(m.at("file")), Str(m.at("method")), Str(m.at("strategy")),
             m.at("format_site").is_null() ? "" : Str(m.at("format_site").at("line")),
             SiteLines(m.at("rotation_sites")), SiteLines(m.at("dimension_sites"))});
    std::string out = t.Render();
    Table s({"ANCHOR", "LINE", "CREATION SITES", "GAPS"});
    for (const auto& a : report.at("slices"))
      s.Add({Str(a.at("file")), Str(a.at("line")), Join(a.at("creation_sites"), "api", ","),
             std::to_string(a.at("gaps").size())});
    return out + "\n" + s.Render();
  }
  if (kind == "inject") {
    Table t({"FILE", "LINE", "KIND", "ORIGINAL", "REPLACEMENT"});
    for (const auto& p : report.at("plan").at("patches"))
      t.Add({Str(p.at("file")), Str(p.at("line")), Str(p.at("kind")),
             Join(p.at("original"), "", " | "), Join(p.at("replacement"), "", " | ")});
    return t.Render();
  }
  if (kind == "simulate") {
    Table t({"RUN", "TARGET", "DETECTED", "RATE", "LATENCY_PROXY"});
    for (const char* run : {"baseline", "perturbed"}) {
      const json& r = report.at(run);
      std::string target = r.contains("target") ? Str(r["target"]["width"]) + "x" +
                                                      Str(r["target"]["height"])
                                                : "";
      t.Add({run, target, Str(r.at("detected")) + "/" + Str(r.at("total")),
             Str(r.at("detection_rate")), Str(r.at("latency_proxy"))});
    }
    for (const auto& p : report.at("size_sweep"))
      t.Add({"sweep", Str(p["target"]["width"]) + "x" + Str(p["target"]["height"]), "",
             Str(p.at("detection_rate")), Str(p.at("latency_proxy"))});
    return t.Render();
  }
  throw std::invalid_argument("unknown report kind " + kind);
}

std::string RenderCsv(const json& report) {
  const std::string& kind = Kind(report);
  std::string out;
  if (kind == "scan" || kind == "pipeline") {
    bool pipeline = kind == "pipeline";
    std::vector<std::string> header = {"app", "verdict", "is_dl_app", "uses_mlkit",
                                       "mlkit_services", "model_files", "api_refs"};
    if (pipeline)
      header.insert(header.end(), {"matches", "strategies", "patches", "injection"});
    out += CsvRow(header);
    for (const auto& a : report.at("apps")) {
      const json& v = pipeline ? a.at("scan") : a;
      std::vector<std::string> row = {Str(v.at("path")), Str(v.at("verdict")),
                                      Str(v.at("is_dl_app")), Str(v.at("uses_mlkit")),
                                      Join(v.at("mlkit_services"), "service"),
                                      std::to_string(v.at("model_files").size()),
                                      std::to_string(v.at("api_refs").size())};
      if (pipeline)
        row.insert(row.end(), {std::to_string(a.at("matches").size()),
                               Strategies(a.at("matches")), Str(a.at("patches")),
                               Str(a.at("injection"))});
      out += CsvRow(row);
    }
    return out;
  }
  if (kind == "locate") {
    out += CsvRow({"file", "class", "method", "strategy", "format_line", "rotation_lines",
                   "dimension_lines"});
    for (const auto& m : report.at("matches"))
      out += CsvRow({Str(m.at("file")), Str(m.at("class")), Str(m.at("method")),
                     Str(m.at("strategy")),
                     m.at("format_site").is_null() ? "" : Str(m.at("format_site").at("line")),
                     Join(m.at("rotation_sites"), "line"), Join(m.at("dimension_sites"), "line")});
    return out;
  }
  if (kind == "inject") {
    out += CsvRow({"file", "line", "kind", "original", "replacement"});
    for (const auto& p : report.at("plan").at("patches"))
      out += CsvRow({Str(p.at("file")), Str(p.at("line")), Str(p.at("kind")),
                     Join(p.at("original"), "", "\n"), Join(p.at("replacement"), "", "\n")});
    return out;
  }
  if (kind == "simulate") {
    out += CsvRow({"series", "width", "height", "detected", "total", "detection_rate",
                   "latency_proxy"});
    for (const char* run : {"baseline", "perturbed"}) {
      const json& r = report.at(run);
      json target = r.value("target", json{{"width", nullptr}, {"height", nullptr}});
      out += CsvRow({run, Str(target["width"]), Str(target["height"]), Str(r.at("detected")),
                     Str(r.at("total")), Str(r.at("detection_rate")), Str(r.at("latency_proxy"))});
    }
    for (const auto& p : report.at("size_sweep"))
      out += CsvRow({"sweep", Str(p["target"]["width"]), Str(p["target"]["height"]), "", "",
                     Str(p.at("detection_rate")), Str(p.at("latency_proxy"))});
    return out;
  }
  throw std::invalid_argument("unknown report kind " + kind);
}

}  // namespace dlprep::pipeline
