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

#include "groundkit/config.hpp"

#include <filesystem>

#include "groundkit/digest.hpp"
#include "groundkit/error.hpp"
#include "groundkit/eval.hpp"
#include "groundkit/records.hpp"

namespace groundkit {

namespace {

using nlohmann::ordered_json;

void apply_override(ordered_json& doc, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like section.key=value: " + spec);
  }
  std::string key_path = spec.substr(0, eq);
  std::string value_text = spec.substr(eq + 1);

  ordered_json value;
  try {
    value = ordered_json::parse(value_text);
  } catch (const nlohmann::json::parse_error&) {
    value = value_text;  // plain string
  }

  ordered_json* node = &doc;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = key_path.find('.', start);
    std::string key = key_path.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("bad override key: " + key_path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

std::string get_string(const ordered_json& doc, const char* key,
                       std::string fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_string()) {
    throw ConfigError(std::string("config: ") + key + " must be a string");
  }
  return doc[key].get<std::string>();
}

std::vector<std::string> get_string_list(const ordered_json& doc,
                                         const char* key) {
  std::vector<std::string> out;
  if (!doc.contains(key)) return out;
  if (!doc[key].is_array()) {
    throw ConfigError(std::string("config: ") + key + " must be an array");
  }
  for (const auto& item : doc[key]) {
    out.push_back(item.get<std::string>());
  }
  return out;
}

template <typename T>
T get_number(const ordered_json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number()) {
    throw ConfigError(std::string("config: ") + key + " must be a number");
  }
  return doc[key].get<T>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json(ordered_json doc) {
  if (!doc.is_object() || !doc.contains("schema") ||
      doc["schema"] != std::string(schemas::kConfig)) {
    throw ConfigError("config: missing or unsupported schema, expected \"" +
                      std::string(schemas::kConfig) + "\"");
  }
  PipelineConfig config;
  config.seed = get_number<std::uint64_t>(doc, "seed", config.seed);
  config.workers = get_number<int>(doc, "workers", config.workers);
  if (config.workers < 0) throw ConfigError("config: workers must be >= 0");

  if (doc.contains("paths")) {
    const auto& paths = doc["paths"];
    config.paths.snapshots = get_string(paths, "snapshots", "");
    config.paths.alias_registry = get_string(paths, "alias_registry", "");
    config.paths.error_patterns = get_string(paths, "error_patterns", "");
    config.paths.adapters = get_string_list(paths, "adapters");
    config.paths.source_steps = get_string_list(paths, "source_steps");
    config.paths.environments = get_string_list(paths, "environments");
    if (paths.contains("variant_templates")) {
      const auto& vt = paths["variant_templates"];
      config.paths.variant_point = get_string(vt, "point", "");
      config.paths.variant_box = get_string(vt, "box", "");
      config.paths.variant_ocr = get_string(vt, "ocr", "");
    }
    config.paths.annotator_prompt = get_string(paths, "annotator_prompt", "");
    config.paths.annotator_script = get_string(paths, "annotator_script", "");
    config.paths.out_dir = get_string(paths, "out_dir", config.paths.out_dir);
  }

  if (doc.contains("filter")) {
    const auto& f = doc["filter"];
    config.filter.max_elements_per_page = get_number<int>(
        f, "max_elements_per_page", config.filter.max_elements_per_page);
    config.filter.bottom_band_fraction = get_number<double>(
        f, "bottom_band_fraction", config.filter.bottom_band_fraction);
    config.filter.clustered_reject_fraction =
        get_number<double>(f, "clustered_reject_fraction",
                           config.filter.clustered_reject_fraction);
    config.filter.min_elements_for_render_check =
        get_number<int>(f, "min_elements_for_render_check",
                        config.filter.min_elements_for_render_check);
  }

  if (doc.contains("segment")) {
    const auto& s = doc["segment"];
    config.segment.window_size.width = get_number<std::int64_t>(
        s, "window_width", config.segment.window_size.width);
    config.segment.window_size.height = get_number<std::int64_t>(
        s, "window_height", config.segment.window_size.height);
    config.segment.min_visible_fraction = get_number<double>(
        s, "min_visible_fraction", config.segment.min_visible_fraction);
    if (config.segment.window_size.width < 1 ||
        config.segment.window_size.height < 1) {
      throw ConfigError("config: window dimensions must be positive");
    }
    if (config.segment.min_visible_fraction < 0.0 ||
        config.segment.min_visible_fraction > 1.0) {
      throw ConfigError("config: min_visible_fraction must be in [0, 1]");
    }
  }

  if (doc.contains("explore")) {
    const auto& e = doc["explore"];
    std::string policy = get_string(e, "policy", "dfs");
    if (policy == "dfs") {
      config.explore.policy = PolicyKind::Dfs;
    } else if (policy == "random-walk") {
      config.explore.policy = PolicyKind::RandomWalk;
    } else {
      throw ConfigError("config: policy must be dfs or random-walk");
    }
    config.explore.max_steps =
        get_number<int>(e, "max_steps", config.explore.max_steps);
    if (config.explore.max_steps < 1) {
      throw ConfigError("config: explore.max_steps must be >= 1");
    }
  }

  if (doc.contains("annotate")) {
    const auto& a = doc["annotate"];
    config.annotate.response_template = get_string(
        a, "response_template", config.annotate.response_template);
    config.annotate.max_retries =
        get_number<int>(a, "max_retries", config.annotate.max_retries);
    config.annotate.base_backoff_ms =
        get_number<int>(a, "base_backoff_ms", config.annotate.base_backoff_ms);
    config.annotate.parallelism =
        get_number<int>(a, "parallelism", config.annotate.parallelism);
    config.annotate.max_response_chars = get_number<int>(
        a, "max_response_chars", config.annotate.max_response_chars);
    if (config.annotate.max_retries < 0 || config.annotate.parallelism < 1) {
      throw ConfigError("config: bad annotate limits");
    }
  }

  if (doc.contains("unify")) {
    const auto& u = doc["unify"];
    config.unify.pack_size =
        get_number<int>(u, "pack_size", config.unify.pack_size);
    config.unify.prefix_prompt_pool = get_number<int>(
        u, "prefix_prompt_pool", config.unify.prefix_prompt_pool);
    if (config.unify.pack_size < 1 || config.unify.prefix_prompt_pool < 1) {
      throw ConfigError("config: pack_size and prefix_prompt_pool must be >= 1");
    }
  }

  if (doc.contains("evaluate")) {
    config.evaluate.predictor =
        get_string(doc["evaluate"], "predictor", config.evaluate.predictor);
    if (!predictor_from_name(config.evaluate.predictor)) {
      throw ConfigError("config: unknown predictor \"" +
                        config.evaluate.predictor + "\"");
    }
  }

  // Range checks shared with FilterConfig consumers run there; validate the
  // obvious ones eagerly for a friendly error.
  if (config.filter.max_elements_per_page < 1 ||
      config.filter.bottom_band_fraction <= 0.0 ||
      config.filter.bottom_band_fraction >= 1.0 ||
      config.filter.clustered_reject_fraction <= 0.0 ||
      config.filter.clustered_reject_fraction > 1.0) {
    throw ConfigError("config: filter thresholds out of range");
  }
  return config;
}

PipelineConfig PipelineConfig::load(const std::string& path,
                                    const std::vector<std::string>& overrides) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& override_spec : overrides) {
    apply_override(doc, override_spec);
  }
  return from_json(std::move(doc));
}

nlohmann::ordered_json PipelineConfig::resolved_json() const {
  ordered_json paths;
  paths["snapshots"] = this->paths.snapshots;
  paths["alias_registry"] = this->paths.alias_registry;
  paths["error_patterns"] = this->paths.error_patterns;
  paths["adapters"] = this->paths.adapters;
  paths["source_steps"] = this->paths.source_steps;
  paths["environments"] = this->paths.environments;
  paths["variant_templates"] = {{"point", this->paths.variant_point},
                                {"box", this->paths.variant_box},
                                {"ocr", this->paths.variant_ocr}};
  paths["annotator_prompt"] = this->paths.annotator_prompt;
  paths["annotator_script"] = this->paths.annotator_script;
  paths["out_dir"] = this->paths.out_dir;

  ordered_json doc;
  doc["schema"] = std::string(schemas::kConfig);
  doc["seed"] = seed;
  doc["workers"] = workers;
  doc["paths"] = paths;
  doc["filter"] = {{"max_elements_per_page", filter.max_elements_per_page},
                   {"bottom_band_fraction", filter.bottom_band_fraction},
                   {"clustered_reject_fraction",
                    filter.clustered_reject_fraction},
                   {"min_elements_for_render_check",
                    filter.min_elements_for_render_check}};
  doc["segment"] = {{"window_width", segment.window_size.width},
                    {"window_height", segment.window_size.height},
                    {"min_visible_fraction", segment.min_visible_fraction}};
  doc["explore"] = {{"policy", explore.policy == PolicyKind::Dfs
                                   ? "dfs"
                                   : "random-walk"},
                    {"max_steps", explore.max_steps}};
  doc["annotate"] = {{"response_template", annotate.response_template},
                     {"max_retries", annotate.max_retries},
                     {"base_backoff_ms", annotate.base_backoff_ms},
                     {"parallelism", annotate.parallelism},
                     {"max_response_chars", annotate.max_response_chars}};
  doc["unify"] = {{"pack_size", unify.pack_size},
                  {"prefix_prompt_pool", unify.prefix_prompt_pool}};
  doc["evaluate"] = {{"predictor", evaluate.predictor}};
  return doc;
}

std::string PipelineConfig::params_digest() const {
  ordered_json doc = resolved_json();
  doc.erase("paths");
  // workers only changes scheduling, never bytes; keep it out of the digest
  // so resumability survives a different worker count.
  doc.erase("workers");
  return sha256_hex(doc.dump());
}

void PipelineConfig::require_paths(const std::vector<std::string>& roles) const {
  auto need = [](const std::string& role, const std::string& value) {
    if (value.empty()) {
      throw ConfigError("config: paths." + role + " is required");
    }
    if (!std::filesystem::exists(value)) {
      throw ConfigError("config: paths." + role + " not found: " + value);
    }
  };
  for (const auto& role : roles) {
    if (role == "snapshots") {
      need(role, paths.snapshots);
    } else if (role == "alias_registry") {
      need(role, paths.alias_registry);
    } else if (role == "error_patterns") {
      need(role, paths.error_patterns);
    } else if (role == "adapters") {
      if (paths.adapters.empty()) {
        throw ConfigError("config: paths.adapters is required");
      }
      for (const auto& p : paths.adapters) need(role, p);
    } else if (role == "source_steps") {
      if (paths.source_steps.empty()) {
        throw ConfigError("config: paths.source_steps is required");
      }
      for (const auto& p : paths.source_steps) need(role, p);
    } else if (role == "environments") {
      if (paths.environments.empty()) {
        throw ConfigError("config: paths.environments is required");
      }
      for (const auto& p : paths.environments) need(role, p);
    } else if (role == "variant_templates") {
      need("variant_templates.point", paths.variant_point);
      need("variant_templates.box", paths.variant_box);
      need("variant_templates.ocr", paths.variant_ocr);
    } else if (role == "annotator_prompt") {
      need(role, paths.annotator_prompt);
    } else {
      throw ConfigError("unknown path role: " + role);
    }
  }
}

}  // namespace groundkit
