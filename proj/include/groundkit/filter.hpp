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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "groundkit/records.hpp"
#include "groundkit/snapshot.hpp"

namespace groundkit {

// Structural page-quality filters. Pages are judged on their element
// geometry alone; no screenshot pixels exist on this interface, so
// "incompletely rendered" is proxied by element sparsity and "poorly
// distributed" by bottom-band clustering. Thresholds are configurable; the
// defaults are the shipped operating point.
struct FilterConfig {
  int max_elements_per_page = 10;
  double bottom_band_fraction = 0.15;
  double clustered_reject_fraction = 0.80;
  int min_elements_for_render_check = 3;
  std::uint64_t seed = 0;
};

enum class PageVerdict {
  Accept,
  RejectErrorPage,
  RejectTooFewElements,
  RejectClusteredBottom,
};

std::string_view verdict_reason(PageVerdict verdict);

PageVerdict filter_page(const PageSnapshot& snapshot,
                        const std::vector<Element>& elements,
                        const FilterConfig& config,
                        const ErrorPagePatterns& patterns);

// Caps a page at max_elements_per_page. Under the cap the input is returned
// unchanged. Over it, a stratified sample keeps one element per distinct
// role first (roles ordered by first appearance), then fills the remainder
// by seeded uniform sampling without replacement; the result preserves
// document order and is always a subsequence of the input.
std::vector<Element> cap_elements(const std::vector<Element>& elements,
                                  const FilterConfig& config);

// Per-corpus accounting. pages_out + sum(rejected) == pages_in always.
struct FilterReport {
  long pages_in = 0;
  long pages_out = 0;
  std::map<std::string, long> rejected;
  long elements_in = 0;
  long elements_out = 0;

  void add_accept(long elements_before, long elements_after);
  void add_reject(PageVerdict verdict, long elements_before);
  void merge(const FilterReport& other);

  nlohmann::ordered_json to_json() const;
};

// Structural annotation lints in the spirit of benchmark revision passes:
// duplicated instructions, degenerate or out-of-range target boxes, and
// instructions that share no token with any referring expression on their
// page. Lints only warn; nothing is deleted.
struct LintFinding {
  std::string kind;  // "duplicate-instruction" | "bad-box" | "unrelated-text"
  std::size_t record_index;
  std::string snapshot_id;
  int window_index;
  std::string message;
};

std::vector<LintFinding> lint_annotations(
    const std::vector<GroundingRecord>& records,
    const std::map<std::string, std::vector<Element>>& elements_by_snapshot);

}  // namespace groundkit
