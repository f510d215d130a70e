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

#include "vpe/abstract_api.hpp"

#include <algorithm>
#include <cmath>

#include "vpe/lang/error.hpp"
#include "vpe/text.hpp"

namespace vpe::api {

using lang::VplError;
using lang::VplException;

const char* to_string(Direction d) {
  switch (d) {
    case Direction::LeftOf: return "left_of";
    case Direction::RightOf: return "right_of";
    case Direction::AboveOf: return "above_of";
    case Direction::BelowOf: return "below_of";
  }
  return "?";
}

bool in_direction(const ImagePatch& candidate, const ImagePatch& anchor, Direction d) {
  switch (d) {
    case Direction::LeftOf: return candidate.horizontal_center() < anchor.left();
    case Direction::RightOf: return candidate.horizontal_center() > anchor.right();
    case Direction::AboveOf: return candidate.vertical_center() < anchor.upper();
    case Direction::BelowOf: return candidate.vertical_center() > anchor.lower();
  }
  return false;
}

std::vector<ImagePatch> get_patches_in_direction(std::span<const ImagePatch> patches,
                                                 const ImagePatch& anchor, Direction d) {
  std::vector<ImagePatch> out;
  for (const auto& p : patches) {
    if (p != anchor && in_direction(p, anchor, d)) out.push_back(p);
  }
  return out;
}

ImagePatch get_patch_closest_to_anchor_object(std::span<const ImagePatch> patches,
                                              const ImagePatch& anchor) {
  const ImagePatch* best = nullptr;
  double best_dist = 0;
  for (const auto& p : patches) {
    if (p == anchor) continue;
    const double d = center_distance(p.box, anchor.box);
    if (!best || d < best_dist) {
      best = &p;
      best_dist = d;
    }
  }
  if (!best) {
    throw VplException(
        VplError::tool_error("closest_to_anchor", "no candidate patches besides the anchor", false));
  }
  return *best;
}

namespace {

template <typename Key>
std::vector<ImagePatch> sorted_by(std::span<const ImagePatch> patches, Key key) {
  std::vector<std::pair<double, ImagePatch>> keyed;
  keyed.reserve(patches.size());
  for (const auto& p : patches) keyed.emplace_back(key(p), p);
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ImagePatch> out;
  out.reserve(keyed.size());
  for (auto& [_, p] : keyed) out.push_back(std::move(p));
  return out;
}

}  // namespace

std::vector<ImagePatch> sort_patches_left_to_right(std::span<const ImagePatch> patches) {
  return sorted_by(patches, [](const ImagePatch& p) { return p.horizontal_center(); });
}

std::vector<ImagePatch> sort_patches_bottom_to_top(std::span<const ImagePatch> patches) {
  return sorted_by(patches, [](const ImagePatch& p) { return -p.vertical_center(); });
}

std::vector<ImagePatch> sort_patches_front_to_back(std::span<const ImagePatch> patches,
                                                   const ToolBackend& backend) {
  return sorted_by(patches, [&](const ImagePatch& p) { return backend.compute_depth(p); });
}

ImagePatch get_middle_patch(std::span<const ImagePatch> patches) {
  if (patches.empty()) {
    throw VplException(VplError::tool_error("get_middle_patch", "empty patch list", false));
  }
  const auto sorted = sort_patches_left_to_right(patches);
  return sorted[(sorted.size() - 1) / 2];
}

double event_match_fraction(std::string_view event_text, std::string_view query) {
  const auto words = text::word_set(query);
  if (words.empty()) return 0;
  return static_cast<double>(text::token_overlap(event_text, query)) /
         static_cast<double>(words.size());
}

std::size_t locate_event(const VideoSegment& segment, std::string_view query,
                         double threshold) {
  const auto& events = segment.video().events;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (ev.end < segment.start_frame() || ev.start > segment.end_frame()) continue;
    if (event_match_fraction(ev.text, query) > threshold) return i;
  }
  throw VplException(VplError::tool_error(
      "event_localization", "no event matching '" + std::string(query) + "'", false));
}

namespace {

VideoSegment window(const VideoSegment& segment, int start, int end, const char* routine) {
  if (start > end) throw VplException(VplError::tool_error(routine, "empty temporal window", false));
  return VideoSegment(segment.video_ptr(), start, end);
}

}  // namespace

VideoSegment get_video_segment_of_event(const VideoSegment& segment, std::string_view event,
                                        const ToolConfig& config) {
  const auto& ev = segment.video().events[locate_event(segment, event, config.text_match_threshold)];
  return window(segment, std::max(ev.start, segment.start_frame()),
                std::min(ev.end, segment.end_frame()), "get_video_segment_of_event");
}

VideoSegment get_video_segment_before_event(const VideoSegment& segment,
                                            std::string_view event, const ToolConfig& config) {
  const auto& ev = segment.video().events[locate_event(segment, event, config.text_match_threshold)];
  return window(segment, segment.start_frame(), ev.start - 1, "get_video_segment_before_event");
}

VideoSegment get_video_segment_after_event(const VideoSegment& segment,
                                           std::string_view event, const ToolConfig& config) {
  const auto& ev = segment.video().events[locate_event(segment, event, config.text_match_threshold)];
  return window(segment, ev.end + 1, segment.end_frame(), "get_video_segment_after_event");
}

std::string caption_video(const VideoSegment& segment) {
  const VideoFixture& v = segment.video();
  if (segment.start_frame() == 0 && segment.end_frame() == v.length() - 1) return v.caption;
  std::string out;
  for (const auto& ev : v.events) {
    if (ev.end < segment.start_frame() || ev.start > segment.end_frame()) continue;
    if (!out.empty()) out += ", then ";
    out += ev.text;
  }
  return out.empty() ? v.frames[segment.start_frame()].caption : out;
}

std::string video_simple_query(const VideoSegment& segment, std::string_view question) {
  const std::string key = text::normalize(question);
  for (const auto& [q, a] : segment.video().qa) {
    if (text::normalize(q) == key) return a;
  }
  return caption_video(segment);
}

}  // namespace vpe::api
