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

#include "vpe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vpe {

bool is_valid(const BBox& b) {
  return std::isfinite(b.x0) && std::isfinite(b.y0) && std::isfinite(b.x1) &&
         std::isfinite(b.y1) && b.x0 <= b.x1 && b.y0 <= b.y1;
}

BBox intersection(const BBox& a, const BBox& b) {
  BBox r{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
         std::min(a.y1, b.y1)};
  if (r.x1 < r.x0) r.x1 = r.x0;
  if (r.y1 < r.y0) r.y1 = r.y0;
  return r;
}

double overlap_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0 || h <= 0) return 0.0;
  return w * h;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = overlap_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double box_distance(const BBox& a, const BBox& b) {
  // Gap along each axis; negative gaps mean the projections overlap.
  const double dx = std::max({0.0, b.x0 - a.x1, a.x0 - b.x1});
  const double dy = std::max({0.0, b.y0 - a.y1, a.y0 - b.y1});
  return std::hypot(dx, dy);
}

double center_distance(const BBox& a, const BBox& b) {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

BBox clip(const BBox& inner, const BBox& outer) {
  return intersection(inner, outer);
}

bool contains(const BBox& outer, const BBox& inner) {
  return inner.x0 >= outer.x0 && inner.y0 >= outer.y0 &&
         inner.x1 <= outer.x1 && inner.y1 <= outer.y1;
}

std::string to_string(const BBox& b) {
  std::ostringstream os;
  os << '[' << b.x0 << ", " << b.y0 << ", " << b.x1 << ", " << b.y1 << ']';
  return os.str();
}

}  // namespace vpe
