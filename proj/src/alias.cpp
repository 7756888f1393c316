// Copyright 2026 The Groundkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "groundkit/alias.hpp"

#include <fstream>
#include <sstream>

#include "groundkit/error.hpp"

namespace groundkit {

AliasRegistry AliasRegistry::parse(std::string_view text) {
  AliasRegistry registry;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    Entry entry;
    if (!(fields >> entry.dataset)) continue;
    if (!(fields >> entry.raw >> entry.canonical)) {
      throw ConfigError("alias registry line " + std::to_string(line_no) +
                        ": expected \"dataset raw canonical [arg_rule]\"");
    }
    fields >> entry.arg_rule;  // optional
    std::string extra;
    if (fields >> extra) {
      throw ConfigError("alias registry line " + std::to_string(line_no) +
                        ": unexpected trailing field \"" + extra + "\"");
    }
    registry.add(std::move(entry));
  }
  return registry;
}

AliasRegistry AliasRegistry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open alias registry: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void AliasRegistry::add(Entry entry) {
  auto key = std::make_pair(entry.dataset, entry.raw);
  if (index_.count(key)) {
    throw ConfigError("duplicate alias entry for (" + entry.dataset + ", " +
                      entry.raw + ")");
  }
  canonical_names_.insert(entry.canonical);
  index_.emplace(std::move(key), entries_.size());
  entries_.push_back(std::move(entry));
}

const AliasRegistry::Entry* AliasRegistry::find(std::string_view raw,
                                                std::string_view dataset) const {
  auto it = index_.find({std::string(dataset), std::string(raw)});
  if (it == index_.end()) {
    it = index_.find({"*", std::string(raw)});
  }
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const std::string& AliasRegistry::canonicalize(std::string_view raw,
                                               std::string_view dataset) const {
  // Canonical names are fixed points regardless of dataset.
  auto canon = canonical_names_.find(std::string(raw));
  if (canon != canonical_names_.end()) return *canon;
  const Entry* entry = find(raw, dataset);
  if (!entry) {
    throw UnmappedActionError("no alias mapping for action \"" +
                              std::string(raw) + "\" (dataset \"" +
                              std::string(dataset) + "\")");
  }
  return entry->canonical;
}

std::set<std::string> AliasRegistry::raw_names() const {
  std::set<std::string> names;
  for (const auto& entry : entries_) names.insert(entry.raw);
  return names;
}

}  // namespace groundkit
