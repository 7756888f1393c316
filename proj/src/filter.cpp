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

#include "groundkit/filter.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "groundkit/error.hpp"
#include "groundkit/rng.hpp"

namespace groundkit {

namespace {

void check_config(const FilterConfig& config) {
  if (config.max_elements_per_page < 1) {
    throw ConfigError("max_elements_per_page must be >= 1");
  }
  if (!(config.bottom_band_fraction > 0.0 &&
        config.bottom_band_fraction < 1.0)) {
    throw ConfigError("bottom_band_fraction must be in (0, 1)");
  }
  if (!(config.clustered_reject_fraction > 0.0 &&
        config.clustered_reject_fraction <= 1.0)) {
    throw ConfigError("clustered_reject_fraction must be in (0, 1]");
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// Lowercase, collapse runs of whitespace: catches near-duplicates that
// differ only in case or spacing.
std::string normalize_instruction(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view verdict_reason(PageVerdict verdict) {
  switch (verdict) {
    case PageVerdict::Accept:
      return "accept";
    case PageVerdict::RejectErrorPage:
      return "error-page";
    case PageVerdict::RejectTooFewElements:
      return "too-few-elements";
    case PageVerdict::RejectClusteredBottom:
      return "clustered-bottom";
  }
  return "accept";
}

PageVerdict filter_page(const PageSnapshot& snapshot,
                        const std::vector<Element>& elements,
                        const FilterConfig& config,
                        const ErrorPagePatterns& patterns) {
  check_config(config);
  if (is_error_page(snapshot, patterns)) return PageVerdict::RejectErrorPage;
  if (static_cast<int>(elements.size()) <
      config.min_elements_for_render_check) {
    return PageVerdict::RejectTooFewElements;
  }

  // Clustering proxy: centers in the bottom band of the page. Fractions are
  // resolved at per-mille precision and compared in exact integer
  // arithmetic so that exactly-at-threshold pages behave the same on every
  // platform. A center is in the band when center_y > (1 - band) * height;
  // the page is rejected when in_band / n >= clustered_reject_fraction.
  const std::int64_t band_pm =
      std::llround(config.bottom_band_fraction * 1000.0);
  const std::int64_t reject_pm =
      std::llround(config.clustered_reject_fraction * 1000.0);
  const std::int64_t height = snapshot.page_size.height;
  std::int64_t in_band = 0;
  for (const auto& element : elements) {
    // center_y > (1000 - band_pm)/1000 * height, with center_y = (y1+y2)/2.
    if ((element.bbox.y1 + element.bbox.y2) * 1000 >
        2 * height * (1000 - band_pm)) {
      ++in_band;
    }
  }
  if (in_band * 1000 >=
      reject_pm * static_cast<std::int64_t>(elements.size())) {
    return PageVerdict::RejectClusteredBottom;
  }
  return PageVerdict::Accept;
}

std::vector<Element> cap_elements(const std::vector<Element>& elements,
                                  const FilterConfig& config) {
  check_config(config);
  const std::size_t cap = static_cast<std::size_t>(config.max_elements_per_page);
  if (elements.size() <= cap) return elements;

  std::vector<bool> chosen(elements.size(), false);
  std::size_t chosen_count = 0;

  // One element per distinct role (first occurrence), roles in order of
  // first appearance, until the cap is reached.
  std::set<std::string> seen_roles;
  for (std::size_t i = 0; i < elements.size() && chosen_count < cap; ++i) {
    if (seen_roles.insert(elements[i].role).second) {
      chosen[i] = true;
      ++chosen_count;
    }
  }

  // Fill the remainder by seeded uniform sampling without replacement.
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!chosen[i]) pool.push_back(i);
  }
  SplitMix64 rng(config.seed);
  while (chosen_count < cap && !pool.empty()) {
    std::size_t pick = rng.bounded(pool.size());
    chosen[pool[pick]] = true;
    ++chosen_count;
    pool[pick] = pool.back();
    pool.pop_back();
  }

  std::vector<Element> result;
  result.reserve(cap);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (chosen[i]) result.push_back(elements[i]);
  }
  return result;
}

void FilterReport::add_accept(long elements_before, long elements_after) {
  ++pages_in;
  ++pages_out;
  elements_in += elements_before;
  elements_out += elements_after;
}

void FilterReport::add_reject(PageVerdict verdict, long elements_before) {
  ++pages_in;
  elements_in += elements_before;
  ++rejected[std::string(verdict_reason(verdict))];
}

void FilterReport::merge(const FilterReport& other) {
  pages_in += other.pages_in;
  pages_out += other.pages_out;
  elements_in += other.elements_in;
  elements_out += other.elements_out;
  for (const auto& [reason, count] : other.rejected) {
    rejected[reason] += count;
  }
}

nlohmann::ordered_json FilterReport::to_json() const {
  nlohmann::ordered_json out;
  out["schema"] = std::string(schemas::kFilterReport);
  out["pages_in"] = pages_in;
  out["pages_out"] = pages_out;
  nlohmann::ordered_json reasons;
  for (const auto& [reason, count] : rejected) reasons[reason] = count;
  out["rejected"] = reasons;
  out["elements_in"] = elements_in;
  out["elements_out"] = elements_out;
  return out;
}

std::vector<LintFinding> lint_annotations(
    const std::vector<GroundingRecord>& records,
    const std::map<std::string, std::vector<Element>>& elements_by_snapshot) {
  std::vector<LintFinding> findings;

  // (a) duplicate instructions per screenshot window.
  std::map<std::pair<std::string, int>, std::map<std::string, std::size_t>>
      seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& record = records[i];
    auto key = std::make_pair(record.snapshot_id, record.window_index);
    std::string normalized = normalize_instruction(record.text);
    auto [it, inserted] = seen[key].emplace(normalized, i);
    if (!inserted) {
      findings.push_back(LintFinding{
          "duplicate-instruction", i, record.snapshot_id, record.window_index,
          "duplicates record " + std::to_string(it->second) + ": \"" +
              record.text + "\""});
    }
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& record = records[i];

    // (b) degenerate or out-of-range target boxes.
    if (record.target_box) {
      const Box& b = *record.target_box;
      if (!box_valid(b)) {
        findings.push_back(LintFinding{"bad-box", i, record.snapshot_id,
                                       record.window_index,
                                       "target box outside [0,1000] or "
                                       "corners out of order"});
      } else if (box_area(b) == 0) {
        findings.push_back(LintFinding{"bad-box", i, record.snapshot_id,
                                       record.window_index,
                                       "target box has zero area"});
      }
    }

    // (c) instruction shares no token with any referring expression.
    auto elements = elements_by_snapshot.find(record.snapshot_id);
    if (elements == elements_by_snapshot.end()) continue;
    auto instruction_tokens = tokenize(record.text);
    std::set<std::string> expr_tokens;
    for (const auto& element : elements->second) {
      for (auto& token : tokenize(element.expr)) {
        expr_tokens.insert(std::move(token));
      }
    }
    bool overlaps = false;
    for (const auto& token : instruction_tokens) {
      if (expr_tokens.count(token)) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps && !instruction_tokens.empty() && !expr_tokens.empty()) {
      findings.push_back(
          LintFinding{"unrelated-text", i, record.snapshot_id,
                      record.window_index,
                      "instruction shares no token with any referring "
                      "expression on the page"});
    }
  }
  return findings;
}

}  // namespace groundkit
