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

#include "groundkit/eval.hpp"
#include "groundkit/filter.hpp"
#include "groundkit/segment.hpp"
#include "groundkit/snapshot.hpp"

namespace groundkit {

// Batch kernels over whole corpora. Pages, records and steps are
// independent, so the inner loops are data-parallel; each kernel ships in an
// OpenMP-parallel form and a serial reference form that must produce
// identical output (results are ordered by input index, never by completion
// order, so worker count cannot change a single byte). The benchmark target
// compares the two.

struct CorpusOptions {
  int workers = 0;  // 0 = OpenMP default
};

struct IngestedPage {
  PageSnapshot snapshot;
  std::vector<Element> elements;
  std::vector<std::string> warnings;
};

// Parses one snapshot per input line and extracts its elements. A malformed
// line fails the whole batch with the lowest offending line number.
std::vector<IngestedPage> ingest_corpus(const std::vector<std::string>& lines,
                                        const ExtractConfig& config,
                                        const CorpusOptions& options = {});
std::vector<IngestedPage> ingest_corpus_serial(
    const std::vector<std::string>& lines, const ExtractConfig& config);

struct FilteredPage {
  PageVerdict verdict = PageVerdict::Accept;
  std::vector<Element> kept;  // capped; empty on rejection
};

// Applies filter_page and cap_elements per page. Each page's sampling seed
// is derived from (seed, snapshot id), so per-page results do not depend on
// corpus order.
std::vector<FilteredPage> filter_corpus(const std::vector<IngestedPage>& pages,
                                        const FilterConfig& config,
                                        const ErrorPagePatterns& patterns,
                                        std::uint64_t seed,
                                        const CorpusOptions& options = {});
std::vector<FilteredPage> filter_corpus_serial(
    const std::vector<IngestedPage>& pages, const FilterConfig& config,
    const ErrorPagePatterns& patterns, std::uint64_t seed);

FilterReport make_filter_report(const std::vector<IngestedPage>& pages,
                                const std::vector<FilteredPage>& filtered);

// Windows + REG records per accepted page. Web pages whose width differs
// from the window width are skipped (horizontal segmentation is not
// performed); desktop/mobile snapshots are captured screens and get one
// native-size window.
struct SegmentedPage {
  bool segmented = false;
  std::vector<GroundingRecord> records;
};

std::vector<SegmentedPage> segment_corpus(
    const std::vector<IngestedPage>& pages,
    const std::vector<FilteredPage>& filtered, const SegmentConfig& config,
    const CorpusOptions& options = {});
std::vector<SegmentedPage> segment_corpus_serial(
    const std::vector<IngestedPage>& pages,
    const std::vector<FilteredPage>& filtered, const SegmentConfig& config);

// Per-step verdicts in input order.
std::vector<StepVerdict> evaluate_corpus(const std::vector<AgentStep>& steps,
                                         const CustomActionManifest& manifest,
                                         const CorpusOptions& options = {});
std::vector<StepVerdict> evaluate_corpus_serial(
    const std::vector<AgentStep>& steps, const CustomActionManifest& manifest);

}  // namespace groundkit
