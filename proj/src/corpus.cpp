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

#include "groundkit/corpus.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "groundkit/error.hpp"
#include "groundkit/rng.hpp"

namespace groundkit {

namespace {

int resolve_workers(const CorpusOptions& options) {
#ifdef _OPENMP
  return options.workers > 0 ? options.workers : omp_get_max_threads();
#else
  (void)options;
  return 1;
#endif
}

// Runs fn(i) for every index, in parallel when OpenMP is available.
// Exceptions are captured per item and the lowest-index failure is rethrown
// after the loop, so error reporting is deterministic too.
template <typename Fn>
void parallel_indexed(std::size_t count, int workers, Fn&& fn) {
  std::vector<std::string> failures(count);
  bool failed = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers)
#endif
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(i)] = e.what();
      failed = true;
    }
  }
  (void)workers;
  if (failed) {
    for (std::size_t i = 0; i < count; ++i) {
      if (!failures[i].empty()) {
        throw DataError("item " + std::to_string(i) + ": " + failures[i]);
      }
    }
  }
}

IngestedPage ingest_one(const std::string& line, const ExtractConfig& config) {
  IngestedPage page;
  page.snapshot = parse_snapshot(line, &page.warnings);
  page.elements = extract_elements(page.snapshot, config);
  return page;
}

FilteredPage filter_one(const IngestedPage& page, const FilterConfig& config,
                        const ErrorPagePatterns& patterns, std::uint64_t seed) {
  FilteredPage result;
  result.verdict = filter_page(page.snapshot, page.elements, config, patterns);
  if (result.verdict == PageVerdict::Accept) {
    FilterConfig per_page = config;
    per_page.seed = derive_seed(seed, "cap/" + page.snapshot.id);
    result.kept = cap_elements(page.elements, per_page);
  }
  return result;
}

SegmentedPage segment_one(const IngestedPage& page, const FilteredPage& filtered,
                          const SegmentConfig& config) {
  SegmentedPage result;
  if (filtered.verdict != PageVerdict::Accept) return result;
  std::vector<Window> windows;
  if (page.snapshot.platform == Platform::Web) {
    // Only full-page web renders are segmented. Pages whose width differs
    // from the window width are rejected upstream of segmentation.
    if (page.snapshot.page_size.width != config.window_size.width) {
      return result;
    }
    windows = plan_windows(page.snapshot.page_size, config.window_size);
  } else {
    // Desktop/mobile snapshots are captured screens: one native-size frame.
    windows.push_back(Window{0, 0, page.snapshot.page_size});
  }
  result.segmented = true;
  result.records = emit_reg_records(page.snapshot, filtered.kept, windows,
                                    config.min_visible_fraction);
  return result;
}

}  // namespace

std::vector<IngestedPage> ingest_corpus(const std::vector<std::string>& lines,
                                        const ExtractConfig& config,
                                        const CorpusOptions& options) {
  std::vector<IngestedPage> pages(lines.size());
  parallel_indexed(lines.size(), resolve_workers(options),
                   [&](std::size_t i) { pages[i] = ingest_one(lines[i], config); });
  return pages;
}

std::vector<IngestedPage> ingest_corpus_serial(
    const std::vector<std::string>& lines, const ExtractConfig& config) {
  std::vector<IngestedPage> pages;
  pages.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      pages.push_back(ingest_one(lines[i], config));
    } catch (const std::exception& e) {
      throw DataError("item " + std::to_string(i) + ": " + e.what());
    }
  }
  return pages;
}

std::vector<FilteredPage> filter_corpus(const std::vector<IngestedPage>& pages,
                                        const FilterConfig& config,
                                        const ErrorPagePatterns& patterns,
                                        std::uint64_t seed,
                                        const CorpusOptions& options) {
  std::vector<FilteredPage> filtered(pages.size());
  parallel_indexed(pages.size(), resolve_workers(options), [&](std::size_t i) {
    filtered[i] = filter_one(pages[i], config, patterns, seed);
  });
  return filtered;
}

std::vector<FilteredPage> filter_corpus_serial(
    const std::vector<IngestedPage>& pages, const FilterConfig& config,
    const ErrorPagePatterns& patterns, std::uint64_t seed) {
  std::vector<FilteredPage> filtered;
  filtered.reserve(pages.size());
  for (const auto& page : pages) {
    filtered.push_back(filter_one(page, config, patterns, seed));
  }
  return filtered;
}

FilterReport make_filter_report(const std::vector<IngestedPage>& pages,
                                const std::vector<FilteredPage>& filtered) {
  if (pages.size() != filtered.size()) {
    throw DataError("page/verdict count mismatch");
  }
  FilterReport report;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const long before = static_cast<long>(pages[i].elements.size());
    if (filtered[i].verdict == PageVerdict::Accept) {
      report.add_accept(before, static_cast<long>(filtered[i].kept.size()));
    } else {
      report.add_reject(filtered[i].verdict, before);
    }
  }
  return report;
}

std::vector<SegmentedPage> segment_corpus(
    const std::vector<IngestedPage>& pages,
    const std::vector<FilteredPage>& filtered, const SegmentConfig& config,
    const CorpusOptions& options) {
  if (pages.size() != filtered.size()) {
    throw DataError("page/verdict count mismatch");
  }
  std::vector<SegmentedPage> segmented(pages.size());
  parallel_indexed(pages.size(), resolve_workers(options), [&](std::size_t i) {
    segmented[i] = segment_one(pages[i], filtered[i], config);
  });
  return segmented;
}

std::vector<SegmentedPage> segment_corpus_serial(
    const std::vector<IngestedPage>& pages,
    const std::vector<FilteredPage>& filtered, const SegmentConfig& config) {
  if (pages.size() != filtered.size()) {
    throw DataError("page/verdict count mismatch");
  }
  std::vector<SegmentedPage> segmented;
  segmented.reserve(pages.size());
  for (std::size_t i = 0; i < pages.size(); ++i) {
    segmented.push_back(segment_one(pages[i], filtered[i], config));
  }
  return segmented;
}

std::vector<StepVerdict> evaluate_corpus(const std::vector<AgentStep>& steps,
                                         const CustomActionManifest& manifest,
                                         const CorpusOptions& options) {
  std::vector<StepVerdict> verdicts(steps.size());
  parallel_indexed(steps.size(), resolve_workers(options), [&](std::size_t i) {
    verdicts[i] = evaluate_step(steps[i], manifest);
  });
  return verdicts;
}

std::vector<StepVerdict> evaluate_corpus_serial(
    const std::vector<AgentStep>& steps, const CustomActionManifest& manifest) {
  std::vector<StepVerdict> verdicts;
  verdicts.reserve(steps.size());
  for (const auto& step : steps) {
    verdicts.push_back(evaluate_step(step, manifest));
  }
  return verdicts;
}

}  // namespace groundkit
