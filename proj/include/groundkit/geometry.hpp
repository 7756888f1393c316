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

#include <algorithm>
#include <cstdint>
#include <optional>

#include "groundkit/error.hpp"

namespace groundkit {

// Normalized coordinates are integer per-mille of the reference frame's
// width/height, i.e. in [0, 1000]. Pixel coordinates are plain integers in
// the page or screen frame.

struct Point {
  int x = 0;
  int y = 0;

  bool operator==(const Point&) const = default;
};

struct Box {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  bool operator==(const Box&) const = default;
};

struct PixelPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  bool operator==(const PixelPoint&) const = default;
};

struct PixelSize {
  std::int64_t width = 0;
  std::int64_t height = 0;

  bool operator==(const PixelSize&) const = default;
};

struct PixelBox {
  std::int64_t x1 = 0;
  std::int64_t y1 = 0;
  std::int64_t x2 = 0;
  std::int64_t y2 = 0;

  bool operator==(const PixelBox&) const = default;
};

inline bool point_valid(const Point& p) {
  return p.x >= 0 && p.x <= 1000 && p.y >= 0 && p.y <= 1000;
}

inline bool box_valid(const Box& b) {
  return b.x1 <= b.x2 && b.y1 <= b.y2 && b.x1 >= 0 && b.y1 >= 0 &&
         b.x2 <= 1000 && b.y2 <= 1000;
}

inline std::int64_t box_area(const Box& b) {
  return static_cast<std::int64_t>(b.x2 - b.x1) *
         static_cast<std::int64_t>(b.y2 - b.y1);
}

inline std::int64_t pixel_box_area(const PixelBox& b) {
  return (b.x2 - b.x1) * (b.y2 - b.y1);
}

inline std::optional<PixelBox> pixel_box_intersect(const PixelBox& a,
                                                   const PixelBox& b) {
  PixelBox r{std::max(a.x1, b.x1), std::max(a.y1, b.y1), std::min(a.x2, b.x2),
             std::min(a.y2, b.y2)};
  if (r.x1 >= r.x2 || r.y1 >= r.y2) return std::nullopt;
  return r;
}

// round(value * 1000 / extent), half away from zero is never needed because
// inputs are clamped non-negative first; this is plain round-half-up.
inline int to_per_mille(std::int64_t value, std::int64_t extent) {
  if (extent <= 0) throw DataError("non-positive frame dimension");
  if (value <= 0) return 0;
  std::int64_t q = (2000 * value + extent) / (2 * extent);
  return static_cast<int>(std::min<std::int64_t>(q, 1000));
}

inline std::int64_t from_per_mille(int per_mille, std::int64_t extent) {
  if (extent <= 0) throw DataError("non-positive frame dimension");
  std::int64_t v = per_mille;
  if (v <= 0) return 0;
  return (2 * v * extent + 1000) / 2000;
}

// Pixel point -> per-mille of the page, round-half-up, clamped to [0, 1000].
inline Point normalize_point(const PixelPoint& px, const PixelSize& page) {
  return Point{to_per_mille(px.x, page.width), to_per_mille(px.y, page.height)};
}

inline PixelPoint denormalize_point(const Point& p, const PixelSize& page) {
  return PixelPoint{from_per_mille(p.x, page.width),
                    from_per_mille(p.y, page.height)};
}

inline Box normalize_box(const PixelBox& px, const PixelSize& page) {
  return Box{to_per_mille(px.x1, page.width), to_per_mille(px.y1, page.height),
             to_per_mille(px.x2, page.width),
             to_per_mille(px.y2, page.height)};
}

inline PixelBox denormalize_box(const Box& b, const PixelSize& page) {
  return PixelBox{from_per_mille(b.x1, page.width),
                  from_per_mille(b.y1, page.height),
                  from_per_mille(b.x2, page.width),
                  from_per_mille(b.y2, page.height)};
}

inline Point box_center(const Box& b) {
  // Round-half-up midpoint keeps the center inside the box.
  return Point{(b.x1 + b.x2 + 1) / 2, (b.y1 + b.y2 + 1) / 2};
}

}  // namespace groundkit
