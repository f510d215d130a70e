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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vpe/scene.hpp"
#include "vpe/tools.hpp"

// Spatial and temporal routines layered over the tools. Directions follow
// image coordinates: x grows rightward, y grows downward.
namespace vpe::api {

enum class Direction { LeftOf, RightOf, AboveOf, BelowOf };

const char* to_string(Direction d);

/// True when `candidate`'s center lies strictly beyond the matching edge of
/// `anchor`.
bool in_direction(const ImagePatch& candidate, const ImagePatch& anchor, Direction d);

/// Candidates in direction `d` of `anchor`, in input order. The anchor
/// itself is never returned.
std::vector<ImagePatch> get_patches_in_direction(std::span<const ImagePatch> patches,
                                                 const ImagePatch& anchor, Direction d);

/// Patch with the nearest center to the anchor's; ties go to the earliest.
/// Raises ToolError(closest_to_anchor) when nothing but the anchor remains.
ImagePatch get_patch_closest_to_anchor_object(std::span<const ImagePatch> patches,
                                              const ImagePatch& anchor);

/// Stable sorts: by ascending horizontal center, by descending vertical
/// center (bottom of the image first), by ascending depth.
std::vector<ImagePatch> sort_patches_left_to_right(std::span<const ImagePatch> patches);
std::vector<ImagePatch> sort_patches_bottom_to_top(std::span<const ImagePatch> patches);
std::vector<ImagePatch> sort_patches_front_to_back(std::span<const ImagePatch> patches,
                                                   const ToolBackend& backend);

/// Lower median of the left-to-right order.
ImagePatch get_middle_patch(std::span<const ImagePatch> patches);

/// Fraction of the query's words that also occur in `event_text`.
double event_match_fraction(std::string_view event_text, std::string_view query);

/// Index of the first event overlapping `segment` whose match fraction
/// exceeds `threshold`. Raises ToolError(event_localization) on a miss.
std::size_t locate_event(const VideoSegment& segment, std::string_view query, double threshold);

VideoSegment get_video_segment_of_event(const VideoSegment& segment, std::string_view event,
                                        const ToolConfig& config);
/// Frames strictly before the event's first frame.
VideoSegment get_video_segment_before_event(const VideoSegment& segment,
                                            std::string_view event, const ToolConfig& config);
/// Frames strictly after the event's last frame.
VideoSegment get_video_segment_after_event(const VideoSegment& segment,
                                           std::string_view event, const ToolConfig& config);

/// The video caption for the whole video; for a part, the texts of the
/// events it overlaps, or its first frame's caption when there are none.
std::string caption_video(const VideoSegment& segment);
/// Stored answer for the question, else the segment caption.
std::string video_simple_query(const VideoSegment& segment, std::string_view question);

}  // namespace vpe::api
