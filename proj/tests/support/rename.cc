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

#include "support/rename.h"

#include <regex>

namespace dlprep::testing {

namespace {

const std::regex kDescriptor(R"(L[A-Za-z0-9_$\-/]+;)");
const std::regex kMemberRef(R"((L[A-Za-z0-9_$\-/]+;)->([^\s(:]+))");
const std::regex kToken(R"([A-Za-z0-9_$]+)");

// Splits a line into code and quoted-string pieces; odd pieces are strings
// including their quotes.
std::vector<std::string_view> SplitQuoted(std::string_view line) {
  std::vector<std::string_view> pieces;
  size_t start = 0;
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (in_string && line[i] == '\\') {
      ++i;
      continue;
    }
    if (line[i] != '"') continue;
    if (!in_string) {
      pieces.push_back(line.substr(start, i - start));
      start = i;
    } else {
      pieces.push_back(line.substr(start, i + 1 - start));
      start = i + 1;
    }
    in_string = !in_string;
  }
  pieces.push_back(line.substr(start));
  return pieces;
}

std::string_view Trimmed(std::string_view s) {
  size_t b = s.find_first_not_of(" \t");
  return b == std::string_view::npos ? std::string_view() : s.substr(b);
}

template <typename Fn>
std::string ReplaceAll(const std::string& text, const std::regex& re, Fn fn) {
  std::string out;
  auto begin = std::sregex_iterator(text.begin(), text.end(), re);
  size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out.append(text, last, it->position() - last);
    out += fn(*it);
    last = it->position() + it->length();
  }
  out.append(text, last);
  return out;
}

}  // namespace

Renamer::Renamer(uint64_t seed, std::span<const std::string> texts, RenameOptions options)
    : rng_(seed), options_(std::move(options)) {
  for (const auto& text : texts)
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kToken);
         it != std::sregex_iterator(); ++it)
      reserved_.insert(it->str());
}

bool Renamer::IsProtected(std::string_view descriptor) const {
  for (const auto& p : options_.protected_prefixes)
    if (descriptor.starts_with(p)) return true;
  return false;
}

std::string Renamer::FreshName(size_t min_len) {
  static constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyz";
  for (size_t len = min_len;; ++len) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::string name;
      for (size_t i = 0; i < len; ++i) name += kLetters[rng_() % kLetters.size()];
      if (reserved_.insert(name).second) return name;
    }
  }
}

std::string Renamer::MapClass(std::string_view descriptor) {
  std::string key(descriptor);
  if (IsProtected(key)) return key;
  auto it = classes_.find(key);
  if (it != classes_.end()) return it->second;
  std::string fresh = "L" + FreshName(2) + "/" + FreshName(2) + "/" + FreshName(1) + ";";
  classes_.emplace(key, fresh);
  return fresh;
}

std::string Renamer::MapMember(const std::string& name) {
  if (name == "<init>" || name == "<clinit>") return name;
  auto it = members_.find(name);
  if (it != members_.end()) return it->second;
  std::string fresh = FreshName(1);
  members_.emplace(name, fresh);
  return fresh;
}

std::string Renamer::PathFor(std::string_view descriptor) {
  std::string_view body = descriptor.substr(1, descriptor.size() - 2);
  return std::string(body) + ".smali";
}

std::string Renamer::RenameDescriptors(std::string_view text) {
  return ReplaceAll(std::string(text), kDescriptor,
                    [&](const std::smatch& m) { return MapClass(m.str()); });
}

std::string Renamer::RenameSegment(std::string_view text, bool members,
                                   bool owned_declaration) {
  std::string s(text);
  if (owned_declaration) {
    std::string_view t = Trimmed(s);
    size_t offset = s.size() - t.size();
    if (t.starts_with(".field ")) {
      size_t colon = s.find(':', offset);
      size_t name_start = s.rfind(' ', colon) + 1;
      std::string name = s.substr(name_start, colon - name_start);
      s.replace(name_start, colon - name_start, MapMember(name));
    } else if (t.starts_with(".method ")) {
      size_t paren = s.find('(', offset);
      size_t name_start = s.rfind(' ', paren) + 1;
      std::string name = s.substr(name_start, paren - name_start);
      s.replace(name_start, paren - name_start, MapMember(name));
    }
  }
  if (members) {
    s = ReplaceAll(s, kMemberRef, [&](const std::smatch& m) {
      std::string owner = m.str(1);
      std::string name = m.str(2);
      if (!IsProtected(owner)) name = MapMember(name);
      return owner + "->" + name;
    });
  }
  return RenameDescriptors(s);
}

std::string Renamer::Rename(std::string_view text) {
  bool owned = false;
  std::string out;
  size_t start = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    size_t end = nl == std::string_view::npos ? text.size() : nl + 1;
    std::string_view line = text.substr(start, end - start);
    std::string_view t = Trimmed(line);
    if (t.starts_with(".class ")) {
      std::smatch m;
      std::string s(line);
      if (std::regex_search(s, m, kDescriptor)) owned = !IsProtected(m.str());
    }
    bool declaration = owned && options_.rename_members &&
                       (t.starts_with(".field ") || t.starts_with(".method "));
    auto pieces = SplitQuoted(line);
    for (size_t i = 0; i < pieces.size(); ++i) {
      if (i % 2 == 1) {
        out += pieces[i];
      } else {
        out += RenameSegment(pieces[i], options_.rename_members, declaration && i == 0);
      }
    }
    start = end;
  }
  return out;
}

}  // namespace dlprep::testing
