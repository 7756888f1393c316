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

#include "groundkit/records.hpp"

#include <fstream>
#include <sstream>

#include "groundkit/error.hpp"

namespace groundkit {

namespace {

using nlohmann::ordered_json;

ordered_json parse_json(std::string_view text, const std::string& context) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(context + ": invalid JSON: " + e.what());
  }
}

ordered_json point_json(const Point& p) { return ordered_json{p.x, p.y}; }

ordered_json box_json(const Box& b) {
  return ordered_json{b.x1, b.y1, b.x2, b.y2};
}

Point point_from(const ordered_json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
      !v[1].is_number_integer()) {
    throw DataError(key + ": expected [x, y]");
  }
  return Point{v[0].get<int>(), v[1].get<int>()};
}

Box box_from(const ordered_json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 4) {
    throw DataError(key + ": expected [x1, y1, x2, y2]");
  }
  for (const auto& c : v) {
    if (!c.is_number_integer()) throw DataError(key + ": expected integers");
  }
  return Box{v[0].get<int>(), v[1].get<int>(), v[2].get<int>(),
             v[3].get<int>()};
}

std::string require_string(const ordered_json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    throw DataError(std::string(key) + ": expected string field");
  }
  return it->get<std::string>();
}

template <typename Record>
void write_record_file(const std::string& path, std::string_view schema,
                       const std::vector<Record>& records,
                       ordered_json (*to_json)(const Record&)) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << ordered_json{{"schema", std::string(schema)}}.dump() << '\n';
  for (const auto& record : records) {
    out << to_json(record).dump() << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

void check_header(const std::string& line, std::string_view schema,
                  const std::string& path) {
  ordered_json header = parse_json(line, path + " header");
  if (!header.is_object() || !header.contains("schema") ||
      !header["schema"].is_string() ||
      header["schema"].get<std::string>() != schema) {
    throw DataError(path + ": expected header {\"schema\": \"" +
                    std::string(schema) + "\"}");
  }
}

}  // namespace

std::string_view grounding_kind_name(GroundingKind kind) {
  return kind == GroundingKind::Reg ? "REG" : "IG";
}

ordered_json grounding_to_json(const GroundingRecord& record) {
  ordered_json out;
  out["snapshot"] = record.snapshot_id;
  out["window"] = record.window_index;
  out["kind"] = std::string(grounding_kind_name(record.kind));
  out["text"] = record.text;
  if (record.target_point) out["target_point"] = point_json(*record.target_point);
  if (record.target_box) out["target_box"] = box_json(*record.target_box);
  if (!record.node_path.empty()) out["node_path"] = record.node_path;
  if (record.variant) out["variant"] = *record.variant;
  if (record.answer) out["answer"] = *record.answer;
  if (record.template_id) out["template_id"] = *record.template_id;
  if (record.predicted_point) {
    out["predicted_point"] = point_json(*record.predicted_point);
  }
  if (record.predicted_box) out["predicted_box"] = box_json(*record.predicted_box);
  return out;
}

GroundingRecord grounding_from_json(const ordered_json& doc, bool validate) {
  GroundingRecord record;
  record.snapshot_id = require_string(doc, "snapshot");
  auto window = doc.find("window");
  if (window == doc.end() || !window->is_number_integer()) {
    throw DataError("window: expected integer field");
  }
  record.window_index = window->get<int>();
  std::string kind = require_string(doc, "kind");
  if (kind == "REG") {
    record.kind = GroundingKind::Reg;
  } else if (kind == "IG") {
    record.kind = GroundingKind::Ig;
  } else {
    throw DataError("kind: expected REG or IG");
  }
  record.text = require_string(doc, "text");
  if (auto it = doc.find("target_point"); it != doc.end()) {
    record.target_point = point_from(*it, "target_point");
  }
  if (auto it = doc.find("target_box"); it != doc.end()) {
    record.target_box = box_from(*it, "target_box");
  }
  if (auto it = doc.find("node_path"); it != doc.end()) {
    record.node_path = it->get<std::string>();
  }
  if (auto it = doc.find("variant"); it != doc.end()) {
    record.variant = it->get<std::string>();
  }
  if (auto it = doc.find("answer"); it != doc.end()) {
    record.answer = it->get<std::string>();
  }
  if (auto it = doc.find("template_id"); it != doc.end()) {
    record.template_id = it->get<int>();
  }
  if (auto it = doc.find("predicted_point"); it != doc.end()) {
    record.predicted_point = point_from(*it, "predicted_point");
  }
  if (auto it = doc.find("predicted_box"); it != doc.end()) {
    record.predicted_box = box_from(*it, "predicted_box");
  }

  if (validate) {
    if (record.target_point.has_value() == record.target_box.has_value()) {
      throw DataError(
          "record must carry exactly one of target_point/target_box");
    }
    if (record.target_point && !point_valid(*record.target_point)) {
      throw DataError("target_point outside [0,1000]");
    }
    if (record.target_box && !box_valid(*record.target_box)) {
      throw DataError("target_box invalid");
    }
  }
  return record;
}

ordered_json step_to_json(const AgentStep& step) {
  ordered_json out;
  if (!step.dataset.empty()) out["dataset"] = step.dataset;
  if (!step.split.empty()) out["split"] = step.split;
  out["task"] = step.task;
  out["history"] = step.history;
  out["screenshot"] = step.screenshot_ref;
  out["screen"] = {step.screen.width, step.screen.height};
  if (step.thought) out["thought"] = *step.thought;
  out["gt_action"] = step.gt_action;
  if (step.predicted_action) out["predicted_action"] = *step.predicted_action;
  return out;
}

AgentStep step_from_json(const ordered_json& doc) {
  AgentStep step;
  if (auto it = doc.find("dataset"); it != doc.end()) {
    step.dataset = it->get<std::string>();
  }
  if (auto it = doc.find("split"); it != doc.end()) {
    step.split = it->get<std::string>();
  }
  step.task = require_string(doc, "task");
  if (auto it = doc.find("history"); it != doc.end()) {
    if (!it->is_array()) throw DataError("history: expected array");
    for (const auto& entry : *it) {
      if (!entry.is_string()) throw DataError("history: expected strings");
      step.history.push_back(entry.get<std::string>());
    }
  }
  step.screenshot_ref = require_string(doc, "screenshot");
  if (auto it = doc.find("screen"); it != doc.end()) {
    if (!it->is_array() || it->size() != 2) {
      throw DataError("screen: expected [width, height]");
    }
    step.screen = PixelSize{(*it)[0].get<std::int64_t>(),
                            (*it)[1].get<std::int64_t>()};
    if (step.screen.width < 1 || step.screen.height < 1) {
      throw DataError("screen: dimensions must be positive");
    }
  }
  if (auto it = doc.find("thought"); it != doc.end()) {
    step.thought = it->get<std::string>();
  }
  step.gt_action = require_string(doc, "gt_action");
  if (auto it = doc.find("predicted_action"); it != doc.end()) {
    step.predicted_action = it->get<std::string>();
  }
  return step;
}

ordered_json pack_to_json(const ConversationPack& pack) {
  ordered_json out;
  out["prefix_prompt_id"] = pack.prefix_prompt_id;
  ordered_json samples = ordered_json::array();
  for (const auto& record : pack.samples) {
    samples.push_back(grounding_to_json(record));
  }
  out["samples"] = samples;
  return out;
}

ConversationPack pack_from_json(const ordered_json& doc) {
  ConversationPack pack;
  auto id = doc.find("prefix_prompt_id");
  if (id == doc.end() || !id->is_number_integer()) {
    throw DataError("prefix_prompt_id: expected integer");
  }
  pack.prefix_prompt_id = id->get<int>();
  auto samples = doc.find("samples");
  if (samples == doc.end() || !samples->is_array() || samples->empty()) {
    throw DataError("samples: expected non-empty array");
  }
  for (const auto& sample : *samples) {
    pack.samples.push_back(grounding_from_json(sample));
  }
  return pack;
}

void write_grounding_file(const std::string& path,
                          const std::vector<GroundingRecord>& records) {
  write_record_file(path, schemas::kGrounding, records, &grounding_to_json);
}

std::vector<GroundingRecord> read_grounding_file(const std::string& path,
                                                 bool validate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty record file");
  check_header(line, schemas::kGrounding, path);
  std::vector<GroundingRecord> records;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(
          grounding_from_json(parse_json(line, path), validate));
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_step_file(const std::string& path,
                     const std::vector<AgentStep>& steps) {
  write_record_file(path, schemas::kSteps, steps, &step_to_json);
}

std::vector<AgentStep> read_step_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty record file");
  check_header(line, schemas::kSteps, path);
  std::vector<AgentStep> steps;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      steps.push_back(step_from_json(parse_json(line, path)));
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return steps;
}

void write_pack_file(const std::string& path,
                     const std::vector<ConversationPack>& packs) {
  write_record_file(path, schemas::kPacks, packs, &pack_to_json);
}

std::vector<ConversationPack> read_pack_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty record file");
  check_header(line, schemas::kPacks, path);
  std::vector<ConversationPack> packs;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      packs.push_back(pack_from_json(parse_json(line, path)));
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return packs;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace groundkit
