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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace groundkit {

// Machine-readable provenance for a run: content digests of every input,
// the parameter digest, output digests and record counts. Inputs are named
// by logical role and outputs by path relative to the output directory, so
// a manifest is byte-identical across machines for identical content — that
// is the reproducibility contract, and it doubles as the resume check.

struct ManifestEntry {
  std::string name;
  std::string sha256;
  std::int64_t bytes = 0;

  bool operator==(const ManifestEntry&) const = default;
};

struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  std::string params_digest;
  std::vector<ManifestEntry> inputs;   // sorted by name
  std::vector<ManifestEntry> outputs;  // sorted by name
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::ordered_json& doc);

  void add_input(const std::string& name, const std::string& path);
  // `name` is relative to out_dir.
  void add_output(const std::string& out_dir, const std::string& name);
  void sort_entries();
};

void write_manifest(const std::string& path, const RunManifest& manifest);

// True when `path` holds a manifest whose command, seed, params and inputs
// equal the candidate's and whose recorded outputs still exist under
// out_dir with matching digests — i.e. the work is already done.
bool manifest_up_to_date(const std::string& path, const RunManifest& candidate,
                         const std::string& out_dir);

}  // namespace groundkit
