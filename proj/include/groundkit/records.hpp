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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "groundkit/geometry.hpp"

namespace groundkit {

// Line-delimited record files: a schema-versioned header line followed by
// one JSON record per line, fields in fixed order, absent optionals omitted.
// Writers emit byte-identical files for identical inputs.

namespace schemas {
inline constexpr std::string_view kSnapshot = "groundkit.snapshot/1";
inline constexpr std::string_view kGrounding = "groundkit.grounding/1";
inline constexpr std::string_view kSteps = "groundkit.steps/1";
inline constexpr std::string_view kPacks = "groundkit.packs/1";
inline constexpr std::string_view kEnv = "groundkit.env/1";
inline constexpr std::string_view kConfig = "groundkit.config/1";
inline constexpr std::string_view kManifest = "groundkit.manifest/1";
inline constexpr std::string_view kFilterReport = "groundkit.filter_report/1";
inline constexpr std::string_view kMetricReport = "groundkit.metric_report/1";
}  // namespace schemas

enum class GroundingKind { Reg, Ig };

std::string_view grounding_kind_name(GroundingKind kind);

// One grounding sample: a screenshot window reference, a referring
// expression or instruction, and the target coordinates in per-mille of the
// window. Exactly one of target_point/target_box is set on coordinate-
// bearing records.
struct GroundingRecord {
  std::string snapshot_id;
  int window_index = 0;
  GroundingKind kind = GroundingKind::Reg;
  std::string text;  // expression, or rendered instruction for variants
  std::optional<Point> target_point;
  std::optional<Box> target_box;
  std::string node_path;                // provenance; may be empty
  std::optional<std::string> variant;   // "point" | "box" | "ocr"
  std::optional<std::string> answer;    // OCR answer text
  std::optional<int> template_id;       // instruction template index
  std::optional<Point> predicted_point;  // filled by predictors/models
  std::optional<Box> predicted_box;

  bool operator==(const GroundingRecord&) const = default;
};

// One fine-tuning / evaluation step: instruction, serialized action history,
// screenshot reference, ground-truth action and (optionally) a prediction,
// both in the TAGGED dialect. `screen` is the source pixel frame the
// per-mille coordinates refer to.
struct AgentStep {
  std::string dataset;
  std::string split;
  std::string task;
  std::vector<std::string> history;
  std::string screenshot_ref;
  PixelSize screen{1000, 1000};
  std::optional<std::string> thought;
  std::string gt_action;
  std::optional<std::string> predicted_action;

  bool operator==(const AgentStep&) const = default;
};

// Grounding samples grouped into one training conversation with a prefix
// prompt drawn from a predefined pool.
struct ConversationPack {
  int prefix_prompt_id = 0;
  std::vector<GroundingRecord> samples;

  bool operator==(const ConversationPack&) const = default;
};

nlohmann::ordered_json grounding_to_json(const GroundingRecord& record);
// `validate` enforces coordinate invariants; pass false to load suspect
// records for linting.
GroundingRecord grounding_from_json(const nlohmann::ordered_json& doc,
                                    bool validate = true);

nlohmann::ordered_json step_to_json(const AgentStep& step);
AgentStep step_from_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json pack_to_json(const ConversationPack& pack);
ConversationPack pack_from_json(const nlohmann::ordered_json& doc);

// File IO. Readers check the header schema and report the offending line
// number on malformed records.
void write_grounding_file(const std::string& path,
                          const std::vector<GroundingRecord>& records);
std::vector<GroundingRecord> read_grounding_file(const std::string& path,
                                                 bool validate = true);

void write_step_file(const std::string& path,
                     const std::vector<AgentStep>& steps);
std::vector<AgentStep> read_step_file(const std::string& path);

void write_pack_file(const std::string& path,
                     const std::vector<ConversationPack>& packs);
std::vector<ConversationPack> read_pack_file(const std::string& path);

// Plain text helpers shared by the stages.
std::vector<std::string> read_lines(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace groundkit
