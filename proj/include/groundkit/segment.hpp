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

#include <optional>
#include <vector>

#include "groundkit/records.hpp"
#include "groundkit/snapshot.hpp"

namespace groundkit {

// Full-page renders are segmented into fixed-resolution screenshot windows
// (default 1920x1080) stacked vertically. Windows are coordinate frames
// only; pixel cropping belongs to an external renderer keyed by
// (snapshot id, window index).

struct Window {
  int index = 0;
  std::int64_t origin_y = 0;
  PixelSize size{};

  bool operator==(const Window&) const = default;

  PixelBox rect() const {
    return PixelBox{0, origin_y, size.width, origin_y + size.height};
  }
};

struct SegmentConfig {
  PixelSize window_size{1920, 1080};
  // Minimum visible-area fraction for an element to be emitted into a
  // window, at per-mille precision, boundary inclusive.
  double min_visible_fraction = 0.5;
};

// Non-overlapping windows with stride = window height. The final window is
// anchored so its bottom meets the page bottom (it may overlap its
// predecessor); pages shorter than one window get a single page-height
// window at origin 0. Every page row is covered by at least one window.
std::vector<Window> plan_windows(const PixelSize& page_size,
                                 const PixelSize& window_size);

// Clips the element into the window. If the visible fraction of the
// element's area is at least min_visible_fraction, returns the clipped box
// in per-mille of the window frame; otherwise nothing. Elements straddling a
// window seam can therefore appear in both windows.
std::optional<Box> remap_element(const Element& element, const Window& window,
                                 double min_visible_fraction = 0.5);

// Cross product of windows and elements through remap_element, ordered by
// (window index, document order). Records are unique on
// (snapshot_id, window_index, node_path).
std::vector<GroundingRecord> emit_reg_records(
    const PageSnapshot& snapshot, const std::vector<Element>& elements,
    const std::vector<Window>& windows, double min_visible_fraction = 0.5);

}  // namespace groundkit
