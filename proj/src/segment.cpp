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

#include "groundkit/segment.hpp"

#include <cmath>

#include "groundkit/error.hpp"

namespace groundkit {

std::vector<Window> plan_windows(const PixelSize& page_size,
                                 const PixelSize& window_size) {
  if (page_size.height < 1 || page_size.width < 1) {
    throw DataError("page dimensions must be >= 1");
  }
  if (window_size.height < 1 || window_size.width < 1) {
    throw DataError("window dimensions must be >= 1");
  }

  std::vector<Window> windows;
  if (page_size.height <= window_size.height) {
    windows.push_back(
        Window{0, 0, PixelSize{window_size.width, page_size.height}});
    return windows;
  }

  std::int64_t origin = 0;
  int index = 0;
  while (origin + window_size.height <= page_size.height) {
    windows.push_back(Window{index++, origin, window_size});
    origin += window_size.height;
  }
  if (windows.back().origin_y + window_size.height < page_size.height) {
    windows.push_back(
        Window{index, page_size.height - window_size.height, window_size});
  }
  return windows;
}

std::optional<Box> remap_element(const Element& element, const Window& window,
                                 double min_visible_fraction) {
  const std::int64_t element_area = pixel_box_area(element.bbox);
  if (element_area <= 0) return std::nullopt;
  auto clipped = pixel_box_intersect(element.bbox, window.rect());
  if (!clipped) return std::nullopt;

  // visible/total >= fraction, evaluated at per-mille precision in integer
  // arithmetic so the boundary (e.g. exactly half visible) is inclusive and
  // platform-independent.
  const std::int64_t fraction_pm = std::llround(min_visible_fraction * 1000.0);
  if (pixel_box_area(*clipped) * 1000 < fraction_pm * element_area) {
    return std::nullopt;
  }

  PixelBox local{clipped->x1, clipped->y1 - window.origin_y, clipped->x2,
                 clipped->y2 - window.origin_y};
  return normalize_box(local, window.size);
}

std::vector<GroundingRecord> emit_reg_records(
    const PageSnapshot& snapshot, const std::vector<Element>& elements,
    const std::vector<Window>& windows, double min_visible_fraction) {
  std::vector<GroundingRecord> records;
  for (const auto& window : windows) {
    for (const auto& element : elements) {
      auto box = remap_element(element, window, min_visible_fraction);
      if (!box) continue;
      GroundingRecord record;
      record.snapshot_id = snapshot.id;
      record.window_index = window.index;
      record.kind = GroundingKind::Reg;
      record.text = element.expr;
      record.target_box = *box;
      record.node_path = node_path_string(element.node_path);
      records.push_back(std::move(record));
    }
  }
  return records;
}

}  // namespace groundkit
