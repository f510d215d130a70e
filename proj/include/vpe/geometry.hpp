// Copyright 2026 The VPE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <string>

namespace vpe {

/// Axis-aligned box in pixel coordinates. Origin is the top-left corner of
/// the scene and y grows downward, so `y0` is the upper edge.
struct BBox {
  double x0 = 0;
  double y0 = 0;
  double x1 = 0;
  double y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double center_x() const { return (x0 + x1) / 2; }
  double center_y() const { return (y0 + y1) / 2; }

  std::array<double, 4> as_array() const { return {x0, y0, x1, y1}; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// True when all coordinates are finite and the corners are ordered.
bool is_valid(const BBox& b);

/// Intersection of two boxes; an empty intersection has zero area but may
/// still be returned with ordered corners collapsed onto each other.
BBox intersection(const BBox& a, const BBox& b);

/// Area of the overlap between two boxes (0 when disjoint or touching).
double overlap_area(const BBox& a, const BBox& b);

/// Intersection over union. Two zero-area boxes give 0.
double iou(const BBox& a, const BBox& b);

/// Euclidean distance between the closest points of the two boxes; 0 when
/// they overlap or touch.
double box_distance(const BBox& a, const BBox& b);

/// Distance between the two box centers.
double center_distance(const BBox& a, const BBox& b);

/// `inner` clipped to `outer`.
BBox clip(const BBox& inner, const BBox& outer);

/// True when `inner` lies within `outer` (edges inclusive).
bool contains(const BBox& outer, const BBox& inner);

std::string to_string(const BBox& b);

}  // namespace vpe
