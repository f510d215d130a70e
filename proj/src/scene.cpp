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

#include "vpe/scene.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vpe/text.hpp"

namespace vpe {

using nlohmann::json;

std::string SceneObject::description() const {
  std::string out = name;
  for (const auto& a : attributes) {
    out.push_back(' ');
    out += a;
  }
  return out;
}

namespace {

std::string lookup_qa(const std::map<std::string, std::string>& qa,
                      std::string_view question, const std::string& fallback) {
  const std::string key = text::normalize(question);
  for (const auto& [q, a] : qa) {
    if (text::normalize(q) == key) return a;
  }
  return fallback;
}

}  // namespace

std::string SceneFixture::answer(std::string_view question) const {
  return lookup_qa(qa, question, caption);
}

std::string VideoFixture::answer(std::string_view question) const {
  return lookup_qa(qa, question, caption);
}

ImagePatch full_patch(const SceneFixture& scene) {
  return ImagePatch{scene.scene_id, scene.bounds(), std::nullopt};
}

VideoSegment::VideoSegment(std::shared_ptr<const VideoFixture> video,
                           int start_frame, int end_frame)
    : video_(std::move(video)), start_(start_frame), end_(end_frame) {
  if (!video_) throw std::invalid_argument("VideoSegment: null video");
  if (start_ < 0 || start_ > end_ || end_ >= video_->length()) {
    throw std::invalid_argument("VideoSegment: frame range [" +
                                std::to_string(start_) + ", " +
                                std::to_string(end_) + "] outside video");
  }
}

VideoSegment::VideoSegment(std::shared_ptr<const VideoFixture> video)
    : VideoSegment(video, 0, video ? video->length() - 1 : -1) {}

std::vector<ImagePatch> VideoSegment::frames() const {
  std::vector<ImagePatch> out;
  out.reserve(static_cast<std::size_t>(num_frames()));
  for (int i = start_; i <= end_; ++i) {
    out.push_back(full_patch(video_->frames[static_cast<std::size_t>(i)]));
  }
  return out;
}

FixtureError::FixtureError(std::string field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message),
      field_(std::move(field)) {}

namespace {

// Field accessors that report the JSON path of the offending value.
const json& require(const json& obj, const std::string& key,
                    const std::string& path) {
  if (!obj.is_object()) throw FixtureError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw FixtureError(path.empty() ? key : path + "." + key,
                       "missing required field");
  }
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string get_string(const json& obj, const std::string& key,
                       const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) throw FixtureError(join(path, key), "expected a string");
  return v.get<std::string>();
}

double get_number(const json& obj, const std::string& key,
                  const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number()) throw FixtureError(join(path, key), "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer()) {
    throw FixtureError(join(path, key), "expected an integer");
  }
  return v.get<int>();
}

BBox get_box(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) {
    throw FixtureError(path, "expected [x0, y0, x1, y1]");
  }
  for (const auto& c : v) {
    if (!c.is_number()) throw FixtureError(path, "box coordinates must be numbers");
  }
  BBox b{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
         v[3].get<double>()};
  if (!is_valid(b)) throw FixtureError(path, "box corners out of order");
  return b;
}

std::map<std::string, std::string> get_qa(const json& obj,
                                          const std::string& path) {
  std::map<std::string, std::string> qa;
  auto it = obj.find("qa");
  if (it == obj.end()) return qa;
  const std::string qpath = join(path, "qa");
  if (!it->is_object()) throw FixtureError(qpath, "expected an object");
  std::set<std::string> seen;
  for (const auto& [q, a] : it->items()) {
    if (!a.is_string()) throw FixtureError(qpath + "." + q, "expected a string");
    if (!seen.insert(text::normalize(q)).second) {
      throw FixtureError(qpath + "." + q, "duplicate question after normalization");
    }
    qa.emplace(q, a.get<std::string>());
  }
  return qa;
}

SceneFixture scene_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw FixtureError(path, "expected an object");
  SceneFixture s;
  s.scene_id = get_string(j, "scene_id", path);
  s.width = get_int(j, "width", path);
  s.height = get_int(j, "height", path);
  if (s.width <= 0) throw FixtureError(join(path, "width"), "must be positive");
  if (s.height <= 0) throw FixtureError(join(path, "height"), "must be positive");
  s.background_depth = get_number(j, "background_depth", path);
  if (s.background_depth < 0) {
    throw FixtureError(join(path, "background_depth"), "must be nonnegative");
  }
  s.caption = j.contains("caption") ? get_string(j, "caption", path) : "";
  s.qa = get_qa(j, path);
  const json& objs = require(j, "objects", path);
  const std::string opath = join(path, "objects");
  if (!objs.is_array()) throw FixtureError(opath, "expected an array");
  const BBox bounds = s.bounds();
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const std::string p = opath + "[" + std::to_string(i) + "]";
    const json& o = objs[i];
    SceneObject obj;
    obj.name = get_string(o, "name", p);
    obj.box = get_box(require(o, "box", p), p + ".box");
    if (!contains(bounds, obj.box)) {
      throw FixtureError(p + ".box", "box exceeds scene bounds");
    }
    if (o.contains("attributes")) {
      const json& attrs = o["attributes"];
      if (!attrs.is_array()) throw FixtureError(p + ".attributes", "expected an array");
      for (const auto& a : attrs) {
        if (!a.is_string()) throw FixtureError(p + ".attributes", "expected strings");
        obj.attributes.push_back(a.get<std::string>());
      }
    }
    obj.depth = get_number(o, "depth", p);
    if (obj.depth < 0) throw FixtureError(p + ".depth", "must be nonnegative");
    obj.confidence = get_number(o, "confidence", p);
    if (obj.confidence < 0 || obj.confidence > 1) {
      throw FixtureError(p + ".confidence", "must lie in [0, 1]");
    }
    s.objects.push_back(std::move(obj));
  }
  return s;
}

VideoFixture video_from_json(const json& j) {
  if (!j.is_object()) throw FixtureError("", "expected an object");
  VideoFixture v;
  v.video_id = get_string(j, "video_id", "");
  v.caption = j.contains("caption") ? get_string(j, "caption", "") : "";
  v.qa = get_qa(j, "");
  const json& frames = require(j, "frames", "");
  if (!frames.is_array()) throw FixtureError("frames", "expected an array");
  if (frames.empty()) throw FixtureError("frames", "video has no frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    v.frames.push_back(scene_from_json(frames[i], "frames[" + std::to_string(i) + "]"));
  }
  if (j.contains("events")) {
    const json& events = j["events"];
    if (!events.is_array()) throw FixtureError("events", "expected an array");
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::string p = "events[" + std::to_string(i) + "]";
      VideoEvent e;
      e.text = get_string(events[i], "text", p);
      e.start = get_int(events[i], "start", p);
      e.end = get_int(events[i], "end", p);
      if (e.start < 0 || e.start > e.end || e.end >= v.length()) {
        throw FixtureError(p, "event interval outside [0, frames-1]");
      }
      v.events.push_back(std::move(e));
    }
  }
  return v;
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FixtureError("", std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureError("", "cannot open fixture file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json scene_to_json(const SceneFixture& s) {
  json objs = json::array();
  for (const auto& o : s.objects) {
    objs.push_back({{"name", o.name},
                    {"box", o.box.as_array()},
                    {"attributes", o.attributes},
                    {"depth", o.depth},
                    {"confidence", o.confidence}});
  }
  return {{"scene_id", s.scene_id},
          {"width", s.width},
          {"height", s.height},
          {"background_depth", s.background_depth},
          {"caption", s.caption},
          {"qa", s.qa},
          {"objects", std::move(objs)}};
}

}  // namespace

SceneFixture parse_scene_fixture(std::string_view json_text) {
  return scene_from_json(parse_document(json_text), "");
}

VideoFixture parse_video_fixture(std::string_view json_text) {
  // A video may also arrive as the first record of a JSONL file.
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error&) {
    std::istringstream lines{std::string(json_text)};
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    doc = parse_document(line);
  }
  return video_from_json(doc);
}

SceneFixture load_scene_fixture(const std::filesystem::path& path) {
  return parse_scene_fixture(read_file(path));
}

VideoFixture load_video_fixture(const std::filesystem::path& path) {
  return parse_video_fixture(read_file(path));
}

bool is_video_fixture_file(const std::filesystem::path& path) {
  std::istringstream lines{read_file(path)};
  std::string line;
  std::string doc;
  // Only the first record matters for JSONL; a pretty-printed document is
  // read whole.
  while (std::getline(lines, line)) doc += line + "\n";
  json j = json::parse(doc, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    std::istringstream again{doc};
    while (std::getline(again, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    j = json::parse(line, nullptr, false);
  }
  return j.is_object() && j.contains("frames");
}

std::string serialize_scene_fixture(const SceneFixture& scene) {
  return scene_to_json(scene).dump(2);
}

std::string serialize_video_fixture(const VideoFixture& video) {
  json frames = json::array();
  for (const auto& f : video.frames) frames.push_back(scene_to_json(f));
  json events = json::array();
  for (const auto& e : video.events) {
    events.push_back({{"text", e.text}, {"start", e.start}, {"end", e.end}});
  }
  json j{{"video_id", video.video_id},
         {"caption", video.caption},
         {"qa", video.qa},
         {"frames", std::move(frames)},
         {"events", std::move(events)}};
  return j.dump(2);
}

}  // namespace vpe
