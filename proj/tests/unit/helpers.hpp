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

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "vpe/dataset.hpp"
#include "vpe/llm.hpp"
#include "vpe/scene.hpp"
#include "vpe/tools.hpp"

namespace vpe::test {

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(VPE_TEST_DATA_DIR) / rel;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline SceneObject obj(std::string name, BBox box, double confidence = 0.9, double depth = 5,
                       std::vector<std::string> attributes = {}) {
  SceneObject o;
  o.name = std::move(name);
  o.box = box;
  o.confidence = confidence;
  o.depth = depth;
  o.attributes = std::move(attributes);
  return o;
}

inline SceneFixture make_scene(std::string id, int w, int h, std::vector<SceneObject> objects) {
  SceneFixture s;
  s.scene_id = std::move(id);
  s.width = w;
  s.height = h;
  s.background_depth = 10;
  s.caption = "a scene";
  s.objects = std::move(objects);
  return s;
}

inline FixtureBackend backend_for(std::initializer_list<SceneFixture> scenes) {
  SceneRegistry reg;
  for (const auto& s : scenes) reg.add_scene(s);
  return FixtureBackend(std::move(reg));
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("vpe_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// Grounding examples over one synthetic scene. Example i asks for
/// `item{i}`; the mock answers with the item itself (IoU 1) when i is in
/// `zero_shot_correct`, or when ICEs are present and i is in
/// `with_ices_correct`; otherwise it returns an overlapping decoy (IoU 1/3).
struct Synthetic {
  std::vector<LabeledExample> examples;
  MediaLibrary media;
  llm::MockGenerator mock{"synthetic-mock"};
};

inline Synthetic make_synthetic(int n, const std::set<int>& zero_shot_correct,
                                const std::set<int>& with_ices_correct = {}) {
  Synthetic s;
  std::vector<SceneObject> objs;
  for (int i = 0; i < n; ++i) {
    const double x = 40.0 * i;
    objs.push_back(obj("item" + std::to_string(i), {x, 10, x + 30, 60}));
    objs.push_back(obj("decoy" + std::to_string(i), {x + 15, 10, x + 45, 60}));
  }
  s.media.add_scene("row.json", make_scene("row", 40 * n + 50, 100, objs));
  for (int i = 0; i < n; ++i) {
    const std::string item = "item" + std::to_string(i);
    LabeledExample e;
    e.id = "ex" + std::to_string(i);
    e.kind = TaskKind::Grounding;
    e.scene = "row.json";
    e.query = "the " + item;
    const double x = 40.0 * i;
    e.ground_truth = BBox{x, 10, x + 30, 60};
    s.examples.push_back(e);

    const std::string right = "return image.find('" + item + "')[0]\n";
    const std::string wrong = "return image.find('decoy" + std::to_string(i) + "')[0]\n";
    llm::MockGenerator::Rule zero;
    zero.query = e.query;
    zero.ices = 0;
    zero.code = zero_shot_correct.count(i) ? right : wrong;
    s.mock.add_rule(zero);
    llm::MockGenerator::Rule with;
    with.query = e.query;
    with.ices_nonzero = true;
    with.code = zero_shot_correct.count(i) || with_ices_correct.count(i) ? right : wrong;
    s.mock.add_rule(with);
  }
  return s;
}

}  // namespace vpe::test
