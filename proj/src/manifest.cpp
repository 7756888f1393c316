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

#include "groundkit/manifest.hpp"

#include <algorithm>
#include <filesystem>

#include "groundkit/digest.hpp"
#include "groundkit/error.hpp"
#include "groundkit/records.hpp"

namespace groundkit {

namespace {

using nlohmann::ordered_json;

ordered_json entries_json(const std::vector<ManifestEntry>& entries) {
  ordered_json out = ordered_json::array();
  for (const auto& entry : entries) {
    out.push_back({{"name", entry.name},
                   {"sha256", entry.sha256},
                   {"bytes", entry.bytes}});
  }
  return out;
}

std::vector<ManifestEntry> entries_from(const ordered_json& doc,
                                        const char* key) {
  std::vector<ManifestEntry> entries;
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw DataError(std::string("manifest: expected array \"") + key + "\"");
  }
  for (const auto& item : doc[key]) {
    entries.push_back(ManifestEntry{item.at("name").get<std::string>(),
                                    item.at("sha256").get<std::string>(),
                                    item.at("bytes").get<std::int64_t>()});
  }
  return entries;
}

ManifestEntry digest_path(const std::string& name, const std::string& path) {
  return ManifestEntry{
      name, sha256_file(path),
      static_cast<std::int64_t>(std::filesystem::file_size(path))};
}

}  // namespace

ordered_json RunManifest::to_json() const {
  ordered_json out;
  out["schema"] = std::string(schemas::kManifest);
  out["command"] = command;
  out["seed"] = seed;
  out["params_digest"] = params_digest;
  out["inputs"] = entries_json(inputs);
  out["outputs"] = entries_json(outputs);
  out["counts"] = counts;
  return out;
}

RunManifest RunManifest::from_json(const ordered_json& doc) {
  if (!doc.contains("schema") ||
      doc["schema"] != std::string(schemas::kManifest)) {
    throw DataError("manifest: missing or unsupported schema");
  }
  RunManifest manifest;
  manifest.command = doc.at("command").get<std::string>();
  manifest.seed = doc.at("seed").get<std::uint64_t>();
  manifest.params_digest = doc.at("params_digest").get<std::string>();
  manifest.inputs = entries_from(doc, "inputs");
  manifest.outputs = entries_from(doc, "outputs");
  if (doc.contains("counts")) manifest.counts = doc["counts"];
  return manifest;
}

void RunManifest::add_input(const std::string& name, const std::string& path) {
  inputs.push_back(digest_path(name, path));
}

void RunManifest::add_output(const std::string& out_dir,
                             const std::string& name) {
  outputs.push_back(digest_path(name, out_dir + "/" + name));
}

void RunManifest::sort_entries() {
  auto by_name = [](const ManifestEntry& a, const ManifestEntry& b) {
    return a.name < b.name;
  };
  std::sort(inputs.begin(), inputs.end(), by_name);
  std::sort(outputs.begin(), outputs.end(), by_name);
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  write_text_file(path, manifest.to_json().dump(2) + "\n");
}

bool manifest_up_to_date(const std::string& path, const RunManifest& candidate,
                         const std::string& out_dir) {
  if (!std::filesystem::exists(path)) return false;
  RunManifest existing;
  try {
    existing = RunManifest::from_json(
        nlohmann::ordered_json::parse(read_text_file(path)));
  } catch (const std::exception&) {
    return false;  // unreadable manifest: redo the work
  }
  if (existing.command != candidate.command ||
      existing.seed != candidate.seed ||
      existing.params_digest != candidate.params_digest ||
      existing.inputs != candidate.inputs) {
    return false;
  }
  for (const auto& output : existing.outputs) {
    const std::string out_path = out_dir + "/" + output.name;
    if (!std::filesystem::exists(out_path)) return false;
    try {
      if (sha256_file(out_path) != output.sha256) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

}  // namespace groundkit
