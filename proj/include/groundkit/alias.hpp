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

#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace groundkit {

// Resolves raw dataset action names ("tap", "press_home", "input") to
// canonical unified names ("CLICK", "PRESS_HOME", "TYPE"). The registry is
// read-only after load and shareable across threads.
//
// Registry file format, one entry per line:
//
//   dataset  raw_name  CANONICAL  [arg_rule]
//
// `dataset` is a source tag or `*` for any dataset; `arg_rule` optionally
// names how raw arguments map into the canonical slots (see
// DatasetAdapter). '#' starts a comment.
class AliasRegistry {
 public:
  struct Entry {
    std::string dataset;
    std::string raw;
    std::string canonical;
    std::string arg_rule;  // may be empty
  };

  AliasRegistry() = default;

  static AliasRegistry parse(std::string_view text);
  static AliasRegistry load_file(const std::string& path);

  void add(Entry entry);

  // Lookup order: exact canonical name (fixed point), then (dataset, raw),
  // then (*, raw). Throws UnmappedActionError when nothing matches.
  const std::string& canonicalize(std::string_view raw,
                                  std::string_view dataset) const;

  const Entry* find(std::string_view raw, std::string_view dataset) const;

  const std::vector<Entry>& entries() const { return entries_; }
  const std::set<std::string>& canonical_names() const {
    return canonical_names_;
  }

  // Distinct raw names across all entries (the conflict-laden vocabulary the
  // registry compresses).
  std::set<std::string> raw_names() const;

 private:
  std::vector<Entry> entries_;
  std::map<std::pair<std::string, std::string>, std::size_t> index_;
  std::set<std::string> canonical_names_;
};

}  // namespace groundkit
