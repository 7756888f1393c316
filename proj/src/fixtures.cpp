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

#include "groundkit/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>

#include "groundkit/rng.hpp"

namespace groundkit {

namespace {

constexpr const char* kRoles[] = {"button",   "link",    "searchbox",
                                  "textbox",  "checkbox", "combobox",
                                  "menuitem", "tab",      "scrollbar",
                                  "svg"};

constexpr const char* kNouns[] = {
    "settings", "cart",    "profile", "search",  "orders",   "messages",
    "archive",  "billing", "support", "account", "downloads", "library",
    "calendar", "photos",  "reviews", "filters", "wishlist",  "notifications"};

constexpr const char* kVerbs[] = {"open", "view",   "edit",  "browse",
                                  "show", "manage", "check", "update"};

std::string element_name(SplitMix64& rng) {
  std::string name = kVerbs[rng.bounded(std::size(kVerbs))];
  name += ' ';
  name += kNouns[rng.bounded(std::size(kNouns))];
  return name;
}

NodeTree make_element_node(SplitMix64& rng, std::int64_t page_w,
                           std::int64_t y_min, std::int64_t y_max) {
  NodeTree node;
  node.role = kRoles[rng.bounded(std::size(kRoles))];
  const std::int64_t width = 24 + static_cast<std::int64_t>(rng.bounded(460));
  const std::int64_t height = 16 + static_cast<std::int64_t>(rng.bounded(72));
  const std::int64_t x =
      static_cast<std::int64_t>(rng.bounded(std::max<std::int64_t>(1, page_w - width)));
  const std::int64_t span = std::max<std::int64_t>(1, y_max - y_min - height);
  const std::int64_t y = y_min + static_cast<std::int64_t>(rng.bounded(span));
  node.bbox = PixelBox{x, y, x + width, y + height};

  if (node.role == "svg") {
    // Half the SVGs get titles (and thus qualify); half stay bare.
    if (rng.bounded(2) == 0) node.title = element_name(rng);
  } else {
    node.name = element_name(rng);
  }
  if (rng.bounded(12) == 0) node.visible = false;  // sprinkle hidden nodes
  return node;
}

}  // namespace

std::vector<std::string> make_web_corpus(const WebCorpusSpec& spec) {
  SplitMix64 rng(spec.seed);
  std::vector<std::string> lines;
  lines.reserve(static_cast<std::size_t>(spec.pages));

  for (int i = 0; i < spec.pages; ++i) {
    PageSnapshot page;
    char id[32];
    std::snprintf(id, sizeof(id), "web-%05d", i);
    page.id = id;
    page.platform = Platform::Web;
    const std::int64_t height = 400 + static_cast<std::int64_t>(rng.bounded(4400));
    page.page_size = PixelSize{spec.page_width, height};
    page.viewport =
        PixelSize{spec.page_width, std::min<std::int64_t>(height, 1080)};
    page.root.role = "document";
    page.root.bbox = PixelBox{0, 0, spec.page_width, height};

    // Page archetypes: mostly healthy, plus the failure modes the filters
    // exist for.
    const std::uint64_t archetype = rng.bounded(20);
    if (archetype == 0) {
      // Error page.
      page.root.title = rng.bounded(2) == 0 ? "404 Not Found"
                                            : "503 Service Unavailable";
      NodeTree body;
      body.role = "button";
      body.name = "go back";
      body.bbox = PixelBox{100, 100, 300, 160};
      page.root.children.push_back(body);
    } else if (archetype == 1 || archetype == 2) {
      // Sparse page (incomplete-render proxy).
      page.root.title = "Loading";
      const std::uint64_t count = rng.bounded(3);
      for (std::uint64_t k = 0; k < count; ++k) {
        page.root.children.push_back(
            make_element_node(rng, spec.page_width, 0, height));
      }
    } else if (archetype == 3 || archetype == 4) {
      // Bottom-clustered page.
      page.root.title = "Footer farm";
      const std::uint64_t count = 6 + rng.bounded(10);
      const std::int64_t band_top = height - height * 12 / 100;
      for (std::uint64_t k = 0; k < count; ++k) {
        // One element in ten escapes the band.
        bool in_band = rng.bounded(10) != 0;
        page.root.children.push_back(make_element_node(
            rng, spec.page_width, in_band ? band_top : 0,
            in_band ? height : band_top));
      }
    } else {
      // Healthy page.
      page.root.title = element_name(rng);
      const std::uint64_t count = 4 + rng.bounded(28);
      for (std::uint64_t k = 0; k < count; ++k) {
        page.root.children.push_back(
            make_element_node(rng, spec.page_width, 0, height));
      }
    }
    lines.push_back(serialize_snapshot(page));
  }
  return lines;
}

GuiEnvironment make_random_environment(int states, std::uint64_t seed) {
  SplitMix64 rng(seed);
  GuiEnvironment env;
  env.id = "rand-env-" + std::to_string(seed);
  env.task = "explore the synthetic application";
  env.initial = "s0";

  for (int i = 0; i < states; ++i) {
    PageSnapshot screen;
    screen.id = "s" + std::to_string(i);
    screen.platform = Platform::Linux;
    screen.page_size = PixelSize{1920, 1080};
    screen.viewport = screen.page_size;
    screen.root.role = "document";
    screen.root.title = "screen " + std::to_string(i);
    screen.root.bbox = PixelBox{0, 0, 1920, 1080};
    const std::uint64_t buttons = 2 + rng.bounded(4);
    for (std::uint64_t b = 0; b < buttons; ++b) {
      NodeTree node;
      node.role = "button";
      node.name = element_name(rng);
      const std::int64_t x = 40 + static_cast<std::int64_t>(b) * 320;
      node.bbox = PixelBox{x, 200, x + 280, 260};
      screen.root.children.push_back(node);
    }
    env.states.emplace(screen.id, std::move(screen));
  }

  for (int i = 0; i < states; ++i) {
    const std::string from = "s" + std::to_string(i);
    const auto& screen = env.states.at(from);
    const std::uint64_t out_degree =
        rng.bounded(std::min<std::uint64_t>(screen.root.children.size() + 1, 4));
    for (std::uint64_t e = 0; e < out_degree; ++e) {
      EnvTransition t;
      t.from = from;
      t.to = "s" + std::to_string(rng.bounded(static_cast<std::uint64_t>(states)));
      t.element = {static_cast<int>(e)};
      t.action = "CLICK";
      env.transitions.push_back(std::move(t));
    }
  }
  return env;
}

}  // namespace groundkit
