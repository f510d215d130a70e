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

#include "vpe/toolkit.hpp"

#include "vpe/abstract_api.hpp"
#include "vpe/lang/error.hpp"

namespace vpe {

using lang::List;
using lang::Value;
using lang::VplError;
using lang::VplException;

const char* to_string(ApiVariant v) {
  return v == ApiVariant::Abstract ? "abstract" : "vipergpt_style";
}

std::optional<ApiVariant> api_variant_from_string(std::string_view s) {
  if (s == "abstract") return ApiVariant::Abstract;
  if (s == "vipergpt_style") return ApiVariant::ViperGptStyle;
  return std::nullopt;
}

namespace {

[[noreturn]] void bad_arg(std::string_view fn, std::string_view param, std::string_view expected,
                          const Value& got) {
  throw VplException(VplError::type(std::string(fn) + "() argument '" + std::string(param) +
                                    "' must be " + std::string(expected) + ", not " +
                                    lang::type_name(got)));
}

const ImagePatch& as_patch(const Value& v, std::string_view fn, std::string_view param) {
  if (const auto* p = v.get_if<ImagePatch>()) return *p;
  bad_arg(fn, param, "a patch", v);
}

const VideoSegment& as_video(const Value& v, std::string_view fn, std::string_view param) {
  if (const auto* s = v.get_if<VideoSegment>()) return *s;
  bad_arg(fn, param, "a video segment", v);
}

const std::string& as_text(const Value& v, std::string_view fn, std::string_view param) {
  if (const auto* s = v.get_if<std::string>()) return *s;
  bad_arg(fn, param, "text", v);
}

std::vector<ImagePatch> as_patches(const Value& v, std::string_view fn, std::string_view param) {
  if (!v.is<lang::ListPtr>()) bad_arg(fn, param, "a list of patches", v);
  std::vector<ImagePatch> out;
  for (const auto& item : v.list()) {
    const auto* p = item.get_if<ImagePatch>();
    if (!p) bad_arg(fn, param, "a list of patches", item);
    out.push_back(*p);
  }
  return out;
}

std::vector<std::string> as_texts(const Value& v, std::string_view fn, std::string_view param) {
  if (!v.is<lang::ListPtr>()) bad_arg(fn, param, "a list of text", v);
  std::vector<std::string> out;
  for (const auto& item : v.list()) {
    const auto* s = item.get_if<std::string>();
    if (!s) bad_arg(fn, param, "a list of text", item);
    out.push_back(*s);
  }
  return out;
}

Value patch_list(std::vector<ImagePatch> patches) {
  List out;
  out.reserve(patches.size());
  for (auto& p : patches) out.emplace_back(std::move(p));
  return Value(std::move(out));
}

void add_directional(lang::DispatchTable& t, const char* name, api::Direction d) {
  t.add(name, {"patches", "anchor"}, [name, d](std::span<const Value> a) {
    const auto patches = as_patches(a[0], name, "patches");
    return patch_list(api::get_patches_in_direction(patches, as_patch(a[1], name, "anchor"), d));
  });
}

}  // namespace

lang::DispatchTable make_dispatch_table(const ToolBackend& backend, const ToolConfig& config,
                                        ApiVariant variant) {
  lang::DispatchTable t;
  const ToolBackend* b = &backend;
  const bool abstract = variant == ApiVariant::Abstract;

  t.add("find", {"image", "object_name"}, [b, config](std::span<const Value> a) {
    return patch_list(
        b->find(as_patch(a[0], "find", "image"), as_text(a[1], "find", "object_name"), config));
  });
  t.add("exists", {"image", "object_name"}, [b, config](std::span<const Value> a) {
    return Value(b->exists(as_patch(a[0], "exists", "image"),
                           as_text(a[1], "exists", "object_name"), config));
  });
  t.add("verify_property", {"image", "object_name", "attribute"},
        [b, config](std::span<const Value> a) {
          constexpr const char* fn = "verify_property";
          return Value(b->verify_property(as_patch(a[0], fn, "image"),
                                          as_text(a[1], fn, "object_name"),
                                          as_text(a[2], fn, "attribute"), config));
        });
  t.add("best_image_match", {"patches", "query"}, [b, config](std::span<const Value> a) {
    constexpr const char* fn = "best_image_match";
    const auto patches = as_patches(a[0], fn, "patches");
    return Value(b->best_image_match(patches, as_text(a[1], fn, "query"), config));
  });
  t.add("best_text_match", {"image", "queries"}, [b, config](std::span<const Value> a) {
    constexpr const char* fn = "best_text_match";
    const auto queries = as_texts(a[1], fn, "queries");
    return Value(b->best_text_match(queries, as_patch(a[0], fn, "image"), config));
  });
  t.add("compute_depth", {"image"}, [b](std::span<const Value> a) {
    return Value(b->compute_depth(as_patch(a[0], "compute_depth", "image")));
  });
  t.add("distance", {"patch_a", "patch_b"}, [](std::span<const Value> a) {
    return Value(box_distance(as_patch(a[0], "distance", "patch_a").box,
                              as_patch(a[1], "distance", "patch_b").box));
  });
  t.add("simple_query", {"image", "question"}, 1, [b, abstract](std::span<const Value> a) {
    constexpr const char* fn = "simple_query";
    const std::string question = a[1].is_none() ? std::string() : as_text(a[1], fn, "question");
    if (abstract && a[0].is<VideoSegment>()) {
      return Value(api::video_simple_query(a[0].as<VideoSegment>(), question));
    }
    return Value(b->simple_query(as_patch(a[0], fn, "image"), question));
  });
  t.add("select_answer", {"context", "options"}, [b](std::span<const Value> a) {
    constexpr const char* fn = "select_answer";
    const auto options = as_texts(a[1], fn, "options");
    return Value(
        static_cast<std::int64_t>(b->select_answer(as_text(a[0], fn, "context"), options)));
  });

  if (!abstract) return t;

  add_directional(t, "get_patch_left_of", api::Direction::LeftOf);
  add_directional(t, "get_patch_right_of", api::Direction::RightOf);
  add_directional(t, "get_patch_above_of", api::Direction::AboveOf);
  add_directional(t, "get_patch_below_of", api::Direction::BelowOf);

  t.add("get_patch_closest_to_anchor_object", {"patches", "anchor"},
        [](std::span<const Value> a) {
          constexpr const char* fn = "get_patch_closest_to_anchor_object";
          const auto patches = as_patches(a[0], fn, "patches");
          return Value(api::get_patch_closest_to_anchor_object(patches,
                                                               as_patch(a[1], fn, "anchor")));
        });
  t.add("sort_patches_left_to_right", {"patches"}, [](std::span<const Value> a) {
    return patch_list(
        api::sort_patches_left_to_right(as_patches(a[0], "sort_patches_left_to_right", "patches")));
  });
  t.add("sort_patches_bottom_to_top", {"patches"}, [](std::span<const Value> a) {
    return patch_list(
        api::sort_patches_bottom_to_top(as_patches(a[0], "sort_patches_bottom_to_top", "patches")));
  });
  t.add("sort_patches_front_to_back", {"patches"}, [b](std::span<const Value> a) {
    return patch_list(api::sort_patches_front_to_back(
        as_patches(a[0], "sort_patches_front_to_back", "patches"), *b));
  });
  t.add("get_middle_patch", {"patches"}, [](std::span<const Value> a) {
    return Value(api::get_middle_patch(as_patches(a[0], "get_middle_patch", "patches")));
  });

  using SegmentFn = VideoSegment (*)(const VideoSegment&, std::string_view, const ToolConfig&);
  const auto add_temporal = [&](const char* name, SegmentFn fn) {
    t.add(name, {"video", "event"}, [name, fn, config](std::span<const Value> a) {
      return Value(fn(as_video(a[0], name, "video"), as_text(a[1], name, "event"), config));
    });
  };
  add_temporal("get_video_segment_of_event", &api::get_video_segment_of_event);
  add_temporal("get_video_segment_before_event", &api::get_video_segment_before_event);
  add_temporal("get_video_segment_after_event", &api::get_video_segment_after_event);

  t.add("caption_video", {"video"}, [](std::span<const Value> a) {
    return Value(api::caption_video(as_video(a[0], "caption_video", "video")));
  });
  return t;
}

}  // namespace vpe
