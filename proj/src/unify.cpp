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

#include "groundkit/unify.hpp"

#include <charconv>

#include "groundkit/error.hpp"
#include "groundkit/rng.hpp"

namespace groundkit {

namespace {

using nlohmann::ordered_json;

std::int64_t parse_pixel(const std::string& value, const std::string& field) {
  std::int64_t out = 0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw DataError("argument \"" + field + "\" is not an integer: \"" +
                    value + "\"");
  }
  return out;
}

const std::string& require_arg(const RawAction& raw, const std::string& field) {
  auto it = raw.args.find(field);
  if (it == raw.args.end()) {
    throw DataError("action \"" + raw.name + "\" missing required argument \"" +
                    field + "\"");
  }
  return it->second;
}

int normalized_coordinate(std::int64_t pixel, std::int64_t extent,
                          const std::string& field) {
  if (pixel < 0 || pixel > extent) {
    throw DataError("coordinate " + field + "=" + std::to_string(pixel) +
                    " outside source screen [0," + std::to_string(extent) +
                    "]");
  }
  return to_per_mille(pixel, extent);
}

std::string render_one(const std::string& tmpl, std::string_view key,
                       const std::string& value) {
  std::string pattern = "{" + std::string(key) + "}";
  auto pos = tmpl.find(pattern);
  if (pos == std::string::npos) {
    throw ConfigError("variant template is missing " + pattern + ": \"" +
                      tmpl + "\"");
  }
  std::string out = tmpl;
  do {
    out.replace(pos, pattern.size(), value);
    pos = out.find(pattern, pos + value.size());
  } while (pos != std::string::npos);
  return out;
}

std::vector<std::string> load_template_file(const std::string& path,
                                            std::string_view placeholder) {
  std::vector<std::string> templates;
  for (const auto& line : read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.find("{" + std::string(placeholder) + "}") == std::string::npos) {
      throw ConfigError(path + ": template lacks {" +
                        std::string(placeholder) + "}: \"" + line + "\"");
    }
    templates.push_back(line);
  }
  if (templates.empty()) throw ConfigError(path + ": no templates");
  return templates;
}

}  // namespace

std::vector<DatasetAdapter::ArgBinding> DatasetAdapter::parse_arg_rule(
    std::string_view rule) {
  std::vector<ArgBinding> bindings;
  std::size_t start = 0;
  while (start < rule.size()) {
    std::size_t end = rule.find(';', start);
    std::string_view part = rule.substr(
        start, end == std::string_view::npos ? std::string_view::npos
                                             : end - start);
    if (!part.empty()) {
      auto colon = part.find(':');
      if (colon == std::string_view::npos) {
        throw ConfigError("bad arg rule \"" + std::string(rule) +
                          "\": expected slot:field[,field...]");
      }
      auto slot = slot_from_name(part.substr(0, colon));
      if (!slot) {
        throw ConfigError("bad arg rule: unknown slot \"" +
                          std::string(part.substr(0, colon)) + "\"");
      }
      ArgBinding binding{*slot, {}};
      std::string_view fields = part.substr(colon + 1);
      std::size_t fs = 0;
      while (fs <= fields.size()) {
        std::size_t fe = fields.find(',', fs);
        std::string_view field = fields.substr(
            fs, fe == std::string_view::npos ? std::string_view::npos
                                             : fe - fs);
        if (field.empty()) {
          throw ConfigError("bad arg rule: empty field name");
        }
        binding.fields.emplace_back(field);
        if (fe == std::string_view::npos) break;
        fs = fe + 1;
      }
      std::size_t expected =
          binding.slot == ArgSlot::Point ? 2
          : binding.slot == ArgSlot::Box ? 4
                                         : 1;
      if (binding.fields.size() != expected) {
        throw ConfigError("bad arg rule: slot " +
                          std::string(slot_name(binding.slot)) + " needs " +
                          std::to_string(expected) + " field(s)");
      }
      bindings.push_back(std::move(binding));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return bindings;
}

DatasetAdapter DatasetAdapter::parse(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("adapter is not valid JSON: ") + e.what());
  }
  DatasetAdapter adapter;
  if (!doc.contains("dataset") || !doc["dataset"].is_string()) {
    throw ConfigError("adapter: expected dataset tag");
  }
  adapter.dataset_ = doc["dataset"].get<std::string>();
  if (doc.contains("screen_field")) {
    adapter.screen_field_ = doc["screen_field"].get<std::string>();
  }
  if (doc.contains("custom_actions")) {
    adapter.custom_actions_ =
        CustomActionManifest::parse(doc["custom_actions"].get<std::string>());
  }
  if (!doc.contains("actions") || !doc["actions"].is_object()) {
    throw ConfigError("adapter: expected actions map");
  }
  for (const auto& [raw, spec] : doc["actions"].items()) {
    if (!spec.is_object() || !spec.contains("canonical")) {
      throw ConfigError("adapter action \"" + raw +
                        "\": expected {canonical, args?}");
    }
    std::string canonical = spec["canonical"].get<std::string>();
    std::vector<ArgBinding> bindings;
    if (spec.contains("args")) {
      bindings = parse_arg_rule(spec["args"].get<std::string>());
    }
    adapter.actions_.emplace(raw,
                             std::make_pair(std::move(canonical),
                                            std::move(bindings)));
  }
  return adapter;
}

DatasetAdapter DatasetAdapter::load_file(const std::string& path) {
  return parse(read_text_file(path));
}

const std::vector<DatasetAdapter::ArgBinding>* DatasetAdapter::bindings(
    std::string_view raw_name) const {
  auto it = actions_.find(raw_name);
  return it == actions_.end() ? nullptr : &it->second.second;
}

void DatasetAdapter::register_aliases(AliasRegistry& registry) const {
  for (const auto& [raw, spec] : actions_) {
    if (registry.find(raw, dataset_)) continue;  // keep global entries
    registry.add(AliasRegistry::Entry{dataset_, raw, spec.first, ""});
  }
}

SourceStep DatasetAdapter::step_from_json(const ordered_json& doc) const {
  SourceStep step;
  step.dataset = dataset_;
  if (doc.contains("task")) step.task = doc["task"].get<std::string>();
  if (doc.contains("split")) step.split = doc["split"].get<std::string>();
  if (doc.contains("thought")) step.thought = doc["thought"].get<std::string>();
  if (doc.contains("screenshot")) {
    step.screenshot_ref = doc["screenshot"].get<std::string>();
  }

  auto screen = doc.find(screen_field_);
  if (screen == doc.end() || !screen->is_object() ||
      !screen->contains("width") || !screen->contains("height")) {
    throw DataError("source step: missing screen field \"" + screen_field_ +
                    "\"");
  }
  step.screen = PixelSize{(*screen)["width"].get<std::int64_t>(),
                          (*screen)["height"].get<std::int64_t>()};
  if (step.screen.width < 1 || step.screen.height < 1) {
    throw DataError("source step: screen dimensions must be positive");
  }

  auto parse_raw = [](const ordered_json& obj) {
    RawAction raw;
    if (!obj.contains("action") || !obj["action"].is_string()) {
      throw DataError("source step: expected action name");
    }
    raw.name = obj["action"].get<std::string>();
    if (obj.contains("args")) {
      for (const auto& [key, value] : obj["args"].items()) {
        raw.args[key] = value.is_string()
                            ? value.get<std::string>()
                            : value.dump();
      }
    }
    return raw;
  };
  step.action = parse_raw(doc);
  if (doc.contains("history")) {
    for (const auto& entry : doc["history"]) {
      step.history.push_back(parse_raw(entry));
    }
  }
  return step;
}

UnifiedAction unify_action(const RawAction& raw, const PixelSize& screen,
                           const DatasetAdapter& adapter,
                           const AliasRegistry& registry) {
  const std::string& canonical =
      registry.canonicalize(raw.name, adapter.dataset());
  const std::vector<DatasetAdapter::ArgBinding>* bindings =
      adapter.bindings(raw.name);

  auto bound_point = [&](const DatasetAdapter::ArgBinding& b) {
    std::int64_t px = parse_pixel(require_arg(raw, b.fields[0]), b.fields[0]);
    std::int64_t py = parse_pixel(require_arg(raw, b.fields[1]), b.fields[1]);
    return Point{normalized_coordinate(px, screen.width, b.fields[0]),
                 normalized_coordinate(py, screen.height, b.fields[1])};
  };
  auto bound_box = [&](const DatasetAdapter::ArgBinding& b) {
    std::int64_t v[4];
    for (int i = 0; i < 4; ++i) {
      v[i] = parse_pixel(require_arg(raw, b.fields[i]), b.fields[i]);
    }
    Box box{normalized_coordinate(v[0], screen.width, b.fields[0]),
            normalized_coordinate(v[1], screen.height, b.fields[1]),
            normalized_coordinate(v[2], screen.width, b.fields[2]),
            normalized_coordinate(v[3], screen.height, b.fields[3])};
    if (!box_valid(box)) {
      throw DataError("action \"" + raw.name + "\": box corners out of order");
    }
    return box;
  };
  auto find_binding = [&](ArgSlot slot) -> const DatasetAdapter::ArgBinding* {
    if (!bindings) return nullptr;
    for (const auto& b : *bindings) {
      if (b.slot == slot) return &b;
    }
    return nullptr;
  };

  if (canonical == "CLICK") {
    const auto* b = find_binding(ArgSlot::Point);
    if (!b) {
      throw DataError("adapter has no point binding for \"" + raw.name + "\"");
    }
    return UnifiedAction::click(bound_point(*b));
  }
  if (canonical == "TYPE") {
    const auto* b = find_binding(ArgSlot::Text);
    if (!b) {
      throw DataError("adapter has no text binding for \"" + raw.name + "\"");
    }
    const std::string& text = require_arg(raw, b->fields[0]);
    if (text.empty()) throw DataError("TYPE text must be non-empty");
    return UnifiedAction::type_text(text);
  }
  if (canonical == "SCROLL") {
    const auto* b = find_binding(ArgSlot::Direction);
    if (!b) {
      throw DataError("adapter has no direction binding for \"" + raw.name +
                      "\"");
    }
    std::string value = require_arg(raw, b->fields[0]);
    for (auto& c : value) c = static_cast<char>(std::toupper(c));
    auto dir = direction_from_name(value);
    if (!dir) throw DataError("unknown scroll direction \"" + value + "\"");
    return UnifiedAction::scroll(*dir);
  }

  const std::vector<ArgSlot>* slots = adapter.custom_actions().find(canonical);
  if (!slots) {
    throw UnmappedActionError("custom action \"" + canonical +
                              "\" not declared in the dataset manifest");
  }
  CustomAction custom;
  custom.name = canonical;
  for (ArgSlot slot : *slots) {
    switch (slot) {
      case ArgSlot::Point: {
        const auto* b = find_binding(ArgSlot::Point);
        if (!b) {
          throw DataError("adapter has no point binding for \"" + raw.name +
                          "\"");
        }
        custom.point = bound_point(*b);
        break;
      }
      case ArgSlot::Box: {
        const auto* b = find_binding(ArgSlot::Box);
        if (!b) {
          throw DataError("adapter has no box binding for \"" + raw.name +
                          "\"");
        }
        custom.box = bound_box(*b);
        break;
      }
      case ArgSlot::Text: {
        const auto* b = find_binding(ArgSlot::Text);
        if (!b) {
          throw DataError("adapter has no text binding for \"" + raw.name +
                          "\"");
        }
        const std::string& text = require_arg(raw, b->fields[0]);
        if (text.empty()) {
          throw DataError(canonical + " text must be non-empty");
        }
        custom.text = text;
        break;
      }
      case ArgSlot::Direction: {
        const auto* b = find_binding(ArgSlot::Direction);
        if (!b) {
          throw DataError("adapter has no direction binding for \"" +
                          raw.name + "\"");
        }
        std::string value = require_arg(raw, b->fields[0]);
        for (auto& c : value) c = static_cast<char>(std::toupper(c));
        auto dir = direction_from_name(value);
        if (!dir) throw DataError("unknown direction \"" + value + "\"");
        custom.direction = *dir;
        break;
      }
    }
  }
  return UnifiedAction::custom(std::move(custom));
}

AgentStep unify_step(const SourceStep& step, const DatasetAdapter& adapter,
                     const AliasRegistry& registry) {
  AgentStep out;
  out.dataset = step.dataset;
  out.split = step.split;
  out.task = step.task;
  out.screenshot_ref = step.screenshot_ref;
  out.screen = step.screen;
  out.thought = step.thought;
  for (const auto& raw : step.history) {
    out.history.push_back(serialize_action(
        unify_action(raw, step.screen, adapter, registry), Dialect::Tagged));
  }
  out.gt_action = serialize_action(
      unify_action(step.action, step.screen, adapter, registry),
      Dialect::Tagged);
  return out;
}

std::vector<ConversationPack> pack_conversations(
    const std::vector<GroundingRecord>& records, int pack_size,
    int prompt_pool, std::uint64_t seed) {
  if (pack_size < 1) throw ConfigError("pack_size must be >= 1");
  if (prompt_pool < 1) throw ConfigError("prompt_pool must be >= 1");

  SplitMix64 rng(seed);
  std::vector<ConversationPack> packs;
  packs.reserve((records.size() + pack_size - 1) / pack_size);
  for (std::size_t begin = 0; begin < records.size();
       begin += static_cast<std::size_t>(pack_size)) {
    ConversationPack pack;
    pack.prefix_prompt_id = static_cast<int>(rng.bounded(prompt_pool));
    std::size_t end = std::min(records.size(),
                               begin + static_cast<std::size_t>(pack_size));
    pack.samples.assign(records.begin() + begin, records.begin() + end);
    packs.push_back(std::move(pack));
  }
  return packs;
}

std::string_view variant_name(RegVariant variant) {
  switch (variant) {
    case RegVariant::Point:
      return "point";
    case RegVariant::Box:
      return "box";
    case RegVariant::Ocr:
      return "ocr";
  }
  return "box";
}

VariantTemplates VariantTemplates::load(const std::string& point_path,
                                        const std::string& box_path,
                                        const std::string& ocr_path) {
  VariantTemplates templates;
  templates.point = load_template_file(point_path, "expr");
  templates.box = load_template_file(box_path, "expr");
  templates.ocr = load_template_file(ocr_path, "target");
  return templates;
}

GroundingRecord variantize_reg_as(const GroundingRecord& record,
                                  RegVariant variant, int template_id,
                                  const VariantTemplates& templates) {
  if (record.kind != GroundingKind::Reg || !record.target_box) {
    throw DataError("variantize requires a box-bearing REG record");
  }
  const std::vector<std::string>& pool = variant == RegVariant::Point
                                             ? templates.point
                                         : variant == RegVariant::Box
                                             ? templates.box
                                             : templates.ocr;
  if (template_id < 0 || static_cast<std::size_t>(template_id) >= pool.size()) {
    throw ConfigError("template_id out of range");
  }

  GroundingRecord out = record;
  out.variant = std::string(variant_name(variant));
  out.template_id = template_id;
  switch (variant) {
    case RegVariant::Point:
      out.target_point = box_center(*record.target_box);
      out.target_box.reset();
      out.text = render_one(pool[template_id], "expr", record.text);
      break;
    case RegVariant::Box:
      out.text = render_one(pool[template_id], "expr", record.text);
      break;
    case RegVariant::Ocr:
      // The coordinates become the query; the expression is the answer.
      out.answer = record.text;
      out.text = render_one(pool[template_id], "target",
                            serialize_box(*record.target_box, Dialect::Tagged));
      break;
  }
  return out;
}

GroundingRecord variantize_reg(const GroundingRecord& record,
                               std::uint64_t seed,
                               const VariantTemplates& templates) {
  SplitMix64 rng(seed);
  auto variant = static_cast<RegVariant>(rng.bounded(3));
  const std::size_t pool_size = variant == RegVariant::Point
                                    ? templates.point.size()
                                : variant == RegVariant::Box
                                    ? templates.box.size()
                                    : templates.ocr.size();
  int template_id = static_cast<int>(rng.bounded(pool_size));
  return variantize_reg_as(record, variant, template_id, templates);
}

std::vector<GroundingRecord> variantize_corpus(
    const std::vector<GroundingRecord>& records, std::uint64_t seed,
    const VariantTemplates& templates) {
  SplitMix64 rng(derive_seed(seed, "variantize"));
  const std::uint64_t phase = rng.bounded(3);
  std::vector<GroundingRecord> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto variant = static_cast<RegVariant>((phase + i) % 3);
    const std::size_t pool_size = variant == RegVariant::Point
                                      ? templates.point.size()
                                  : variant == RegVariant::Box
                                      ? templates.box.size()
                                      : templates.ocr.size();
    int template_id = static_cast<int>(rng.bounded(pool_size));
    out.push_back(variantize_reg_as(records[i], variant, template_id,
                                    templates));
  }
  return out;
}

}  // namespace groundkit
