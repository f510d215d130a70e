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

#include "vpe/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vpe/text.hpp"

namespace vpe {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

DatasetError::DatasetError(int line, std::string detail, const std::string& file)
    : std::runtime_error((file.empty() ? "line " : file + ":") + std::to_string(line) + ": " +
                         detail),
      line_(line),
      detail_(std::move(detail)) {}

namespace {

const std::set<std::string, std::less<>> kKeys = {"id",     "task_kind", "scene",   "query",
                                                  "gt_box", "gt_answer", "options", "gt_index"};

std::string required_string(const json& j, const char* key, int line) {
  auto it = j.find(key);
  if (it == j.end()) throw DatasetError(line, std::string("missing field '") + key + "'");
  if (!it->is_string()) throw DatasetError(line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

LabeledExample parse_example(const json& j, int line) {
  if (!j.is_object()) throw DatasetError(line, "expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.count(key)) throw DatasetError(line, "unknown field '" + key + "'");
  }
  LabeledExample e;
  e.id = required_string(j, "id", line);
  if (e.id.empty()) throw DatasetError(line, "field 'id' must be nonempty");
  const std::string kind = required_string(j, "task_kind", line);
  const auto parsed = task_kind_from_string(kind);
  if (!parsed) throw DatasetError(line, "unknown task_kind '" + kind + "'");
  e.kind = *parsed;
  e.scene = required_string(j, "scene", line);
  if (e.scene.empty()) throw DatasetError(line, "field 'scene' must be nonempty");
  e.query = required_string(j, "query", line);

  if (auto it = j.find("options"); it != j.end()) {
    if (!it->is_array()) throw DatasetError(line, "field 'options' must be an array of strings");
    for (const auto& o : *it) {
      if (!o.is_string()) throw DatasetError(line, "field 'options' must be an array of strings");
      e.options.push_back(o.get<std::string>());
    }
  }

  const auto forbid = [&](const char* key) {
    if (j.contains(key)) {
      throw DatasetError(line, std::string("field '") + key + "' does not apply to " + kind);
    }
  };
  switch (e.kind) {
    case TaskKind::Grounding: {
      forbid("gt_answer");
      forbid("gt_index");
      auto it = j.find("gt_box");
      if (it == j.end()) throw DatasetError(line, "grounding example needs 'gt_box'");
      if (!it->is_array() || it->size() != 4 ||
          !std::all_of(it->begin(), it->end(), [](const json& v) { return v.is_number(); })) {
        throw DatasetError(line, "field 'gt_box' must be [x0, y0, x1, y1]");
      }
      const BBox box{(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>(),
                     (*it)[3].get<double>()};
      if (!is_valid(box)) throw DatasetError(line, "field 'gt_box' is inverted or non-finite");
      e.ground_truth = box;
      break;
    }
    case TaskKind::Vqa:
      forbid("gt_box");
      forbid("gt_index");
      e.ground_truth = required_string(j, "gt_answer", line);
      break;
    case TaskKind::VideoMcq: {
      forbid("gt_box");
      forbid("gt_answer");
      if (e.options.empty()) throw DatasetError(line, "video_mcq example needs nonempty 'options'");
      auto it = j.find("gt_index");
      if (it == j.end() || !it->is_number_integer()) {
        throw DatasetError(line, "video_mcq example needs integer 'gt_index'");
      }
      const auto idx = it->get<std::int64_t>();
      if (idx < 0 || idx >= static_cast<std::int64_t>(e.options.size())) {
        throw DatasetError(line, "field 'gt_index' is out of range of 'options'");
      }
      e.ground_truth = idx;
      break;
    }
  }
  return e;
}

}  // namespace

std::vector<LabeledExample> parse_dataset(std::string_view jsonl, std::optional<TaskKind> kind) {
  std::vector<LabeledExample> out;
  std::set<std::string> ids;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DatasetError(lineno, std::string("invalid JSON: ") + e.what());
    }
    LabeledExample ex = parse_example(j, lineno);
    if (kind && ex.kind != *kind) {
      throw DatasetError(lineno, std::string("expected task_kind ") + to_string(*kind) + ", got " +
                                     to_string(ex.kind));
    }
    if (!ids.insert(ex.id).second) throw DatasetError(lineno, "duplicate id '" + ex.id + "'");
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<LabeledExample> load_dataset(const std::filesystem::path& path,
                                         std::optional<TaskKind> kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dataset(buf.str(), kind);
  } catch (const DatasetError& e) {
    throw DatasetError(e.line(), e.detail(), path.string());
  }
}

std::string serialize_example(const LabeledExample& e) {
  ojson j;
  j["id"] = e.id;
  j["task_kind"] = to_string(e.kind);
  j["scene"] = e.scene;
  j["query"] = e.query;
  if (!e.options.empty()) j["options"] = e.options;
  std::visit(
      [&](const auto& gt) {
        using T = std::decay_t<decltype(gt)>;
        if constexpr (std::is_same_v<T, BBox>) {
          j["gt_box"] = gt.as_array();
        } else if constexpr (std::is_same_v<T, std::string>) {
          j["gt_answer"] = gt;
        } else {
          j["gt_index"] = gt;
        }
      },
      e.ground_truth);
  return j.dump();
}

std::string serialize_dataset(std::span<const LabeledExample> examples) {
  std::string out;
  for (const auto& e : examples) out += serialize_example(e) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

MediaLibrary MediaLibrary::load(std::span<const LabeledExample> examples,
                                const std::filesystem::path& base_dir) {
  MediaLibrary lib;
  for (const auto& e : examples) {
    if (lib.images_.count(e.scene) || lib.videos_.count(e.scene)) continue;
    std::filesystem::path path(e.scene);
    if (path.is_relative()) path = base_dir / path;
    if (!std::filesystem::exists(path)) {
      throw std::runtime_error("example '" + e.id + "': fixture not found: " + path.string());
    }
    if (is_video_fixture_file(path)) {
      lib.add_video(e.scene, load_video_fixture(path));
    } else {
      lib.add_scene(e.scene, load_scene_fixture(path));
    }
  }
  return lib;
}

void MediaLibrary::add_scene(const std::string& ref, SceneFixture scene) {
  images_.insert_or_assign(ref, full_patch(scene));
  registry_.add_scene(std::move(scene));
}

void MediaLibrary::add_video(const std::string& ref, VideoFixture video) {
  registry_.add_video(video);
  videos_.insert_or_assign(ref, std::make_shared<const VideoFixture>(std::move(video)));
}

lang::ExecutionInput MediaLibrary::input_for(const LabeledExample& e) const {
  lang::ExecutionInput in;
  if (auto it = images_.find(e.scene); it != images_.end()) {
    in.media = it->second;
  } else if (auto vt = videos_.find(e.scene); vt != videos_.end()) {
    in.media = VideoSegment(vt->second);
  } else {
    throw std::out_of_range("example '" + e.id + "': fixture '" + e.scene + "' was not loaded");
  }
  in.question = e.query;
  in.options = e.options;
  return in;
}

double score_program(const lang::ExecutionOutcome& outcome, const GroundTruth& gt, TaskKind kind,
                     std::span<const std::string> options) {
  if (!outcome.ok()) return 0;
  const auto checked = lang::check_return_type(outcome.value(), kind, options);
  const auto* value = std::get_if<lang::Value>(&checked);
  if (!value) return 0;
  switch (kind) {
    case TaskKind::Grounding: {
      const auto* box = std::get_if<BBox>(&gt);
      return box ? iou(value->as<ImagePatch>().box, *box) : 0;
    }
    case TaskKind::Vqa: {
      const auto* answer = std::get_if<std::string>(&gt);
      return answer && text::normalize_answer(value->as<std::string>()) ==
                           text::normalize_answer(*answer)
                 ? 1
                 : 0;
    }
    case TaskKind::VideoMcq: {
      const auto* idx = std::get_if<std::int64_t>(&gt);
      return idx && value->as<std::int64_t>() == *idx ? 1 : 0;
    }
  }
  return 0;
}

}  // namespace vpe
