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

#include "groundkit/explore.hpp"
#include "groundkit/snapshot.hpp"

namespace groundkit {

// Synthetic corpora with the statistical quirks of scraped data: sparse
// pages, bottom-clustered pages, error pages, hidden nodes, titleless SVGs.
// Generation is bit-deterministic in the seed, so fixtures never need to be
// committed at scale.

struct WebCorpusSpec {
  int pages = 100;
  std::uint64_t seed = 0;
  std::int64_t page_width = 1920;
};

// One serialized snapshot per line.
std::vector<std::string> make_web_corpus(const WebCorpusSpec& spec);

// A random state graph of at most `states` screens: every state is a small
// screen snapshot, edges are CLICK transitions, not all states need be
// reachable from the initial one.
GuiEnvironment make_random_environment(int states, std::uint64_t seed);

}  // namespace groundkit
