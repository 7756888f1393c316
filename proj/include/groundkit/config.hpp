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

#include "groundkit/explore.hpp"
#include "groundkit/filter.hpp"
#include "groundkit/segment.hpp"

namespace groundkit {

// One structured config file drives every subcommand; command-line flags
// override config fields (flags win). All paths are resolved relative to the
// working directory and must exist at validation time. The global seed is
// propagated to every stochastic component through derive_seed.

struct PipelineConfig {
  std::uint64_t seed = 1;
  int workers = 0;

  struct Paths {
    std::string snapshots;  // web snapshot corpus, one JSON per line
    std::string alias_registry;
    std::string error_patterns;
    std::vector<std::string> adapters;
    std::vector<std::string> source_steps;
    std::vector<std::string> environments;
    std::string variant_point;
    std::string variant_box;
    std::string variant_ocr;
    std::string annotator_prompt;
    std::string annotator_script;  // optional: scripted stub transport
    std::string out_dir = "out";
  } paths;

  FilterConfig filter;
  SegmentConfig segment;

  struct Explore {
    PolicyKind policy = PolicyKind::Dfs;
    int max_steps = 1000;
  } explore;

  struct Annotate {
    std::string response_template = "interact with the element marked {acted_mark}";
    int max_retries = 3;
    int base_backoff_ms = 50;
    int parallelism = 4;
    int max_response_chars = 2000;
  } annotate;

  struct Unify {
    int pack_size = 15;
    int prefix_prompt_pool = 100;
  } unify;

  struct Evaluate {
    std::string predictor = "gt-echo";
  } evaluate;

  // Loads the file, applies overrides ("a.b.c=value", JSON-typed when the
  // value parses as JSON), and validates ranges. Throws ConfigError.
  static PipelineConfig load(const std::string& path,
                             const std::vector<std::string>& overrides = {});
  static PipelineConfig from_json(nlohmann::ordered_json doc);

  // Digest over the semantic parameters (everything except the paths
  // section); input content is covered separately by per-file digests, so
  // relocating inputs does not change a run's identity.
  std::string params_digest() const;

  // Verifies that every configured input path exists. `roles` restricts the
  // check to what a subcommand actually consumes.
  void require_paths(const std::vector<std::string>& roles) const;

  nlohmann::ordered_json resolved_json() const;
};

}  // namespace groundkit
