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

#include <iosfwd>
#include <string>

#include "groundkit/config.hpp"
#include "groundkit/manifest.hpp"

namespace groundkit {

// Stage runners behind the CLI subcommands. Every stage consumes the raw
// inputs named in the config, writes its products plus a stage manifest
// under out_dir, and is a no-op when that manifest already matches the
// inputs (digest check). Outputs are byte-identical for identical
// (inputs, config, seed) regardless of worker count.

struct StageResult {
  bool skipped = false;  // up-to-date, nothing rewritten
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
};

StageResult run_ingest(const PipelineConfig& config, std::ostream& log);
StageResult run_filter(const PipelineConfig& config, std::ostream& log);
StageResult run_segment(const PipelineConfig& config, std::ostream& log);
StageResult run_explore(const PipelineConfig& config, std::ostream& log);
StageResult run_annotate(const PipelineConfig& config, std::ostream& log);
StageResult run_unify(const PipelineConfig& config, std::ostream& log);
StageResult run_evaluate(const PipelineConfig& config, std::ostream& log);

// The whole chain, one manifest (out_dir/manifest.json) covering every input
// and product.
StageResult run_pipeline(const PipelineConfig& config, std::ostream& log);

}  // namespace groundkit
