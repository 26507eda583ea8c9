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

#include "dlprep/pipeline/config.h"

#include <fstream>
#include <set>

namespace dlprep::pipeline {

using nlohmann::json;

inject::PerturbationSpec Config::DefaultPerturbation() {
  inject::PerturbationSpec spec;
  spec.rotation_delta = 90;
  return spec;
}

namespace {

// Walks one JSON object, checking that every key it holds is consumed.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(Where() + " must be an object");
  }

  void Finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.contains(key)) throw ConfigError("unknown config key " + Join(key));
  }

  const json* Get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  Reader Object(const std::string& key) {
    const json* v = Get(key);
    static const json kEmpty = json::object();
    return Reader(v ? *v : kEmpty, Join(key));
  }

  void Bool(const std::string& key, bool* out) {
    if (const json* v = Get(key)) {
      if (!v->is_boolean()) throw TypeError(key, "a boolean");
      *out = v->get<bool>();
    }
  }

  void String(const std::string& key, std::string* out) {
    if (const json* v = Get(key)) {
      if (!v->is_string()) throw TypeError(key, "a string");
      *out = v->get<std::string>();
    }
  }

  template <typename T>
  void Unsigned(const std::string& key, T* out) {
    if (const json* v = Get(key)) {
      if (!v->is_number_unsigned()) throw TypeError(key, "a non-negative integer");
      *out = v->get<T>();
    }
  }

  void Int(const std::string& key, int* out) {
    if (const json* v = Get(key)) {
      if (!v->is_number_integer()) throw TypeError(key, "an integer");
      *out = v->get<int>();
    }
  }

  // null clears the value.
  void OptionalInt(const std::string& key, std::optional<int64_t>* out) {
    if (const json* v = Get(key)) {
      if (v->is_null()) out->reset();
      else if (v->is_number_integer()) *out = v->get<int64_t>();
      else throw TypeError(key, "an integer or null");
    }
  }

  template <typename Container>
  void Strings(const std::string& key, Container* out) {
    if (const json* v = Get(key)) {
      if (!v->is_array()) throw TypeError(key, "an array of strings");
      Container result;
      for (const auto& e : *v) {
        if (!e.is_string()) throw TypeError(key, "an array of strings");
        result.insert(result.end(), e.get<std::string>());
      }
      *out = std::move(result);
    }
  }

  void Size(const std::string& key, sim::SizePair* out) {
    if (const json* v = Get(key)) *out = ParseSize(*v, Join(key));
  }

  void Sizes(const std::string& key, std::vector<sim::SizePair>* out) {
    if (const json* v = Get(key)) {
      if (!v->is_array() || v->empty()) throw TypeError(key, "a nonempty array of [w, h]");
      out->clear();
      for (const auto& e : *v) out->push_back(ParseSize(e, Join(key)));
    }
  }

 private:
  static sim::SizePair ParseSize(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer() || v[0].get<int64_t>() <= 0 || v[1].get<int64_t>() <= 0 ||
        v[0].get<int64_t>() > 1 << 20 || v[1].get<int64_t>() > 1 << 20)
      throw ConfigError(where + " must be [width, height] with positive integers");
    return {v[0].get<int>(), v[1].get<int>()};
  }

  std::string Where() const { return path_.empty() ? "config" : path_; }
  std::string Join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  ConfigError TypeError(const std::string& key, const std::string& what) const {
    return ConfigError(Join(key) + " must be " + what);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json SizeJson(sim::SizePair s) { return json::array({s.width, s.height}); }

json OptionalJson(const std::optional<int64_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

Config ConfigFromJson(const json& j) {
  Config c;
  Reader root(j, "");
  {
    Reader r = root.Object("scan");
    r.Strings("suffixes", &c.scan.suffixes);
    r.Strings("api_prefixes", &c.scan.api_prefixes);
    r.Finish();
  }
  {
    Reader r = root.Object("locate");
    r.Strings("inference_names", &c.locate.anchors.inference_names);
    r.Strings("anchor_owner_prefixes", &c.locate.anchors.owner_prefixes);
    r.Strings("buffer_string_allowlist", &c.locate.matcher.buffer_string_allowlist);
    r.String("matrix_descriptor", &c.locate.matcher.matrix_descriptor);
    r.Int("slice_depth", &c.locate.slice_depth);
    if (c.locate.slice_depth < 0) throw ConfigError("locate.slice_depth must be >= 0");
    Reader s = r.Object("strategies");
    s.Bool("buffer", &c.locate.matcher.enable_buffer);
    s.Bool("bitmap", &c.locate.matcher.enable_bitmap);
    s.Bool("media_image", &c.locate.matcher.enable_media);
    s.Finish();
    r.Finish();
  }
  {
    Reader r = root.Object("inject");
    r.OptionalInt("rotation", &c.perturbation.rotation_override);
    r.OptionalInt("rotation_delta", &c.perturbation.rotation_delta);
    r.OptionalInt("width", &c.perturbation.width_override);
    r.OptionalInt("height", &c.perturbation.height_override);
    r.OptionalInt("format", &c.perturbation.format_override);
    r.Finish();
    // An explicit rotation without a delta replaces the default delta.
    const json& inj = j.contains("inject") ? j["inject"] : json::object();
    if (inj.contains("rotation") && !inj.contains("rotation_delta") &&
        c.perturbation.rotation_override)
      c.perturbation.rotation_delta.reset();
    try {
      c.perturbation.Validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("inject: ") + e.what());
    }
  }
  {
    Reader r = root.Object("hooks");
    r.String("disassemble", &c.hooks.disassemble);
    r.String("deobfuscate", &c.hooks.deobfuscate);
    r.String("repack", &c.hooks.repack);
    r.Finish();
  }
  {
    Reader r = root.Object("simulate");
    r.Unsigned("cases", &c.simulate.cases);
    r.Unsigned("seed", &c.simulate.seed);
    r.Size("desired", &c.simulate.options.desired);
    r.Sizes("candidates", &c.simulate.options.candidates);
    r.Bool("normalize", &c.simulate.options.normalize);
    r.Finish();
  }
  root.String("output_dir", &c.output_dir);
  root.String("report_path", &c.report_path);
  root.String("log_level", &c.log_level);
  root.Unsigned("workers", &c.workers);
  if (c.workers == 0) throw ConfigError("workers must be at least 1");
  static const std::set<std::string> kLevels = {"trace", "debug", "info", "warn",
                                                "error", "critical", "off"};
  if (!kLevels.contains(c.log_level)) throw ConfigError("unknown log_level " + c.log_level);
  root.Finish();
  c.simulate.options.workers = c.workers;
  c.locate.workers = c.workers;
  return c;
}

Config LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return ConfigFromJson(j);
}

json PerturbationToJson(const inject::PerturbationSpec& spec) {
  return {{"rotation", OptionalJson(spec.rotation_override)},
          {"rotation_delta", OptionalJson(spec.rotation_delta)},
          {"width", OptionalJson(spec.width_override)},
          {"height", OptionalJson(spec.height_override)},
          {"format", OptionalJson(spec.format_override)}};
}

json ConfigToJson(const Config& c) {
  json candidates = json::array();
  for (const auto& s : c.simulate.options.candidates) candidates.push_back(SizeJson(s));
  return {
      {"scan", {{"suffixes", c.scan.suffixes}, {"api_prefixes", c.scan.api_prefixes}}},
      {"locate",
       {{"inference_names", c.locate.anchors.inference_names},
        {"anchor_owner_prefixes", c.locate.anchors.owner_prefixes},
        {"buffer_string_allowlist", c.locate.matcher.buffer_string_allowlist},
        {"matrix_descriptor", c.locate.matcher.matrix_descriptor},
        {"slice_depth", c.locate.slice_depth},
        {"strategies",
         {{"buffer", c.locate.matcher.enable_buffer},
          {"bitmap", c.locate.matcher.enable_bitmap},
          {"media_image", c.locate.matcher.enable_media}}}}},
      {"inject", PerturbationToJson(c.perturbation)},
      {"hooks",
       {{"disassemble", c.hooks.disassemble},
        {"deobfuscate", c.hooks.deobfuscate},
        {"repack", c.hooks.repack}}},
      {"simulate",
       {{"cases", c.simulate.cases},
        {"seed", c.simulate.seed},
        {"desired", SizeJson(c.simulate.options.desired)},
        {"candidates", candidates},
        {"normalize", c.simulate.options.normalize}}},
      {"output_dir", c.output_dir},
      {"report_path", c.report_path},
      {"log_level", c.log_level},
      {"workers", c.workers},
  };
}

}  // namespace dlprep::pipeline
