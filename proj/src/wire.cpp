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

#include "vpe/wire.hpp"

#include <array>

namespace vpe::wire {

using lang::VplError;
using lang::VplException;

namespace {

constexpr std::array<std::string_view, 8> kTools = {
    "find",          "exists",          "verify_property", "best_image_match",
    "best_text_match", "compute_depth", "simple_query",    "select_answer",
};

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw WireError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw WireError(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string get_string(const json& obj, const std::string& key, const std::string& path = {}) {
  const json& v = member(obj, key, path);
  if (!v.is_string()) throw WireError(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> get_strings(const json& obj, const std::string& key,
                                     const std::string& path = {}) {
  const json& v = member(obj, key, path);
  if (!v.is_array()) throw WireError(join(path, key), "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      throw WireError(join(path, key) + "[" + std::to_string(i) + "]", "expected a string");
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

ImagePatch image_of(const ToolRequest& r) {
  if (r.scene_ref.empty()) throw WireError("scene_ref", "missing");
  if (!r.patch) throw WireError("patch", "missing");
  return ImagePatch{r.scene_ref, *r.patch, std::nullopt};
}

json ok(json value) { return json{{"ok", true}, {"value", std::move(value)}}; }

}  // namespace

std::span<const std::string_view> tool_names() { return kTools; }

WireError::WireError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

json encode_box(const BBox& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

BBox decode_box(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 4) throw WireError(field, "expected [x0, y0, x1, y1]");
  for (const auto& v : j) {
    if (!v.is_number()) throw WireError(field, "expected numeric coordinates");
  }
  BBox b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (!is_valid(b)) throw WireError(field, "inverted or non-finite box");
  return b;
}

json encode_config(const ToolConfig& c) {
  return json{{"detection_threshold", c.detection_threshold},
              {"text_match_threshold", c.text_match_threshold},
              {"strict_find", c.strict_find}};
}

ToolConfig decode_config(const json& j) {
  ToolConfig c;
  if (!j.is_object()) throw WireError("config", "expected an object");
  if (auto it = j.find("detection_threshold"); it != j.end()) {
    if (!it->is_number()) throw WireError("config.detection_threshold", "expected a number");
    c.detection_threshold = it->get<double>();
  }
  if (auto it = j.find("text_match_threshold"); it != j.end()) {
    if (!it->is_number()) throw WireError("config.text_match_threshold", "expected a number");
    c.text_match_threshold = it->get<double>();
  }
  if (auto it = j.find("strict_find"); it != j.end()) {
    if (!it->is_boolean()) throw WireError("config.strict_find", "expected a boolean");
    c.strict_find = it->get<bool>();
  }
  if (!(c.detection_threshold >= 0 && c.detection_threshold <= 1)) {
    throw WireError("config.detection_threshold", "must lie in [0, 1]");
  }
  if (!(c.text_match_threshold >= 0 && c.text_match_threshold <= 1)) {
    throw WireError("config.text_match_threshold", "must lie in [0, 1]");
  }
  return c;
}

json encode_request(const ToolRequest& r) {
  json j{{"args", r.args}, {"config", encode_config(r.config)}};
  if (!r.scene_ref.empty()) j["scene_ref"] = r.scene_ref;
  if (r.patch) j["patch"] = encode_box(*r.patch);
  return j;
}

ToolRequest decode_request(std::string_view tool, const json& body) {
  if (!body.is_object()) throw WireError("", "request body must be a JSON object");
  ToolRequest r;
  r.tool = std::string(tool);
  if (auto it = body.find("scene_ref"); it != body.end()) {
    if (!it->is_string()) throw WireError("scene_ref", "expected a string");
    r.scene_ref = it->get<std::string>();
  }
  if (auto it = body.find("patch"); it != body.end()) r.patch = decode_box(*it, "patch");
  if (auto it = body.find("args"); it != body.end()) {
    if (!it->is_object()) throw WireError("args", "expected an object");
    r.args = *it;
  }
  if (auto it = body.find("config"); it != body.end()) r.config = decode_config(*it);
  return r;
}

json encode_error(const VplError& e) {
  json err{{"class", lang::to_string(e.cls)}, {"message", e.message}};
  if (e.cls == lang::ErrorClass::ToolError) {
    err["tool"] = e.tool;
    err["retryable"] = e.retryable;
  }
  return json{{"ok", false}, {"error", std::move(err)}};
}

VplError decode_error(const json& error, std::string_view tool) {
  const std::string message = error.value("message", std::string("unspecified tool failure"));
  const std::string cls = error.value("class", std::string("ToolError"));
  const auto parsed = lang::error_class_from_string(cls);
  if (!parsed || *parsed == lang::ErrorClass::ToolError) {
    return VplError::tool_error(error.value("tool", std::string(tool)), message,
                                error.value("retryable", false));
  }
  VplError e;
  e.cls = *parsed;
  e.message = message;
  return e;
}

json handle_request(const ToolBackend& backend, const ToolRequest& r) {
  const json& a = r.args;
  try {
    if (r.tool == "find") {
      json boxes = json::array();
      for (const auto& p : backend.find(image_of(r), get_string(a, "query", "args"), r.config)) {
        boxes.push_back(encode_box(p.box));
      }
      return ok(std::move(boxes));
    }
    if (r.tool == "exists") {
      return ok(backend.exists(image_of(r), get_string(a, "query", "args"), r.config));
    }
    if (r.tool == "verify_property") {
      return ok(backend.verify_property(image_of(r), get_string(a, "noun", "args"),
                                        get_string(a, "attribute", "args"), r.config));
    }
    if (r.tool == "best_image_match") {
      const json& items = member(a, "patches", "args");
      if (!items.is_array()) throw WireError("args.patches", "expected an array");
      std::vector<ImagePatch> patches;
      for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string path = "args.patches[" + std::to_string(i) + "]";
        patches.push_back(ImagePatch{get_string(items[i], "scene_ref", path),
                                     decode_box(member(items[i], "patch", path), path + ".patch"),
                                     std::nullopt});
      }
      const ImagePatch best =
          backend.best_image_match(patches, get_string(a, "query", "args"), r.config);
      return ok(encode_box(best.box));
    }
    if (r.tool == "best_text_match") {
      const auto queries = get_strings(a, "queries", "args");
      return ok(backend.best_text_match(queries, image_of(r), r.config));
    }
    if (r.tool == "compute_depth") {
      return ok(backend.compute_depth(image_of(r)));
    }
    if (r.tool == "simple_query") {
      return ok(backend.simple_query(image_of(r), get_string(a, "question", "args")));
    }
    if (r.tool == "select_answer") {
      const auto options = get_strings(a, "options", "args");
      return ok(backend.select_answer(get_string(a, "context", "args"), options));
    }
  } catch (const VplException& e) {
    return encode_error(e.error());
  }
  throw WireError("tool", "unknown tool '" + r.tool + "'");
}

}  // namespace vpe::wire
