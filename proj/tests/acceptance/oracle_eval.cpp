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

// Expected results for canned programs, read straight off the fixture
// objects. Nothing here calls the interpreter, the tool backend or the
// abstract routines.

#include "acceptance/oracle_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace vpe::oracle {

namespace {

constexpr double kThreshold = 0.1;

double center_x(const BBox& b) { return (b.x0 + b.x1) / 2; }
double center_y(const BBox& b) { return (b.y0 + b.y1) / 2; }

bool overlaps(const BBox& a, const BBox& b) {
  return std::min(a.x1, b.x1) > std::max(a.x0, b.x0) && std::min(a.y1, b.y1) > std::max(a.y0, b.y0);
}

BBox clipped(const BBox& a, const BBox& to) {
  return {std::max(a.x0, to.x0), std::max(a.y0, to.y0), std::min(a.x1, to.x1),
          std::min(a.y1, to.y1)};
}

BBox whole(const SceneFixture& s) { return {0, 0, double(s.width), double(s.height)}; }

// Detections of `name` inside `region`, most confident first.
std::vector<const SceneObject*> detect(const SceneFixture& s, const BBox& region,
                                       const std::string& name) {
  std::vector<const SceneObject*> out;
  for (const auto& o : s.objects) {
    if (o.name == name && o.confidence >= kThreshold && overlaps(o.box, region)) out.push_back(&o);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](auto* a, auto* b) { return a->confidence > b->confidence; });
  return out;
}

std::vector<BBox> boxes(const SceneFixture& s, const std::string& name) {
  std::vector<BBox> out;
  for (const auto* o : detect(s, whole(s), name)) out.push_back(clipped(o->box, whole(s)));
  return out;
}

std::vector<BBox> by_key(std::vector<BBox> bs, double (*key)(const BBox&)) {
  std::stable_sort(bs.begin(), bs.end(), [&](const BBox& a, const BBox& b) { return key(a) < key(b); });
  return bs;
}

double neg_center_y(const BBox& b) { return -center_y(b); }

std::string list_of(const std::vector<BBox>& bs) {
  std::vector<std::string> items;
  for (const auto& b : bs) items.push_back(canon_box(b));
  return canon_list(items);
}

const SceneObject& object_at(const SceneFixture& s, const BBox& b) {
  for (const auto& o : s.objects)
    if (o.box == b) return o;
  return s.objects.front();
}

std::set<std::string> words(const std::string& text) {
  std::set<std::string> out;
  std::string w;
  for (char c : text + " ") {
    if (c == ' ') {
      if (!w.empty()) out.insert(w);
      w.clear();
    } else {
      w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

int shared_words(const std::set<std::string>& a, const std::set<std::string>& b) {
  int n = 0;
  for (const auto& w : a) n += b.count(w);
  return n;
}

std::set<std::string> description(const SceneObject& o) {
  auto out = words(o.name);
  for (const auto& a : o.attributes) out.insert(a);
  return out;
}

}  // namespace

std::string canon_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string canon_string(const std::string& s) { return "'" + s + "'"; }
std::string canon_bool(bool b) { return b ? "True" : "False"; }

std::string canon_box(const BBox& b) {
  return "box(" + canon_number(b.x0) + ", " + canon_number(b.y0) + ", " + canon_number(b.x1) +
         ", " + canon_number(b.y1) + ")";
}

std::string canon_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "]";
}

std::string canon_error(const std::string& error_class) { return "error " + error_class; }

double pixel_depth(const SceneFixture& scene, const BBox& region) {
  std::vector<double> cells;
  for (int y = int(region.y0); y < int(region.y1); ++y) {
    for (int x = int(region.x0); x < int(region.x1); ++x) {
      for (const auto& o : scene.objects) {
        if (x >= o.box.x0 && x < o.box.x1 && y >= o.box.y0 && y < o.box.y1) cells.push_back(o.depth);
      }
    }
  }
  if (cells.empty()) return scene.background_depth;
  std::sort(cells.begin(), cells.end());
  return cells[(cells.size() + 1) / 2 - 1];
}

std::vector<CannedCase> canned_cases(const std::map<std::string, SceneFixture>& scenes) {
  const SceneFixture& street = scenes.at("street");
  const SceneFixture& kitchen = scenes.at("kitchen");
  const SceneFixture& park = scenes.at("park");
  std::vector<CannedCase> cases;
  auto add = [&](const std::string& scene, std::string source, std::string expected) {
    cases.push_back({scene, std::move(source), std::move(expected)});
  };

  const auto people = boxes(street, "person");
  const auto people_lr = by_key(people, center_x);
  const auto cups = boxes(kitchen, "cup");

  add("street", "return len(image.find('person'))", canon_number(double(people.size())));
  add("kitchen", "return image.find('cup')", list_of(cups));
  add("street",
      "def execute_command(image):\n"
      "    people = sort_patches_left_to_right(image.find('person'))\n"
      "    return people[-2]\n",
      canon_box(people_lr[people_lr.size() - 2]));
  add("kitchen", "return image.exists('cat')", canon_bool(!boxes(kitchen, "cat").empty()));
  add("street", "return image.exists('dog')", canon_bool(!boxes(street, "dog").empty()));
  add("street",
      "people = sort_patches_left_to_right(image.find('person'))\n"
      "jacket = people[1].find('jacket')[0]\n"
      "return jacket.simple_query('what color is the jacket?')",
      canon_string(street.qa.at("what color is the jacket?")));
  {
    const BBox cat = boxes(kitchen, "cat")[0];
    BBox best = cups[0];
    for (const auto& c : cups) {
      if (std::hypot(center_x(c) - center_x(cat), center_y(c) - center_y(cat)) <
          std::hypot(center_x(best) - center_x(cat), center_y(best) - center_y(cat)))
        best = c;
    }
    add("kitchen",
        "cups = image.find('cup')\ncat = image.find('cat')[0]\n"
        "return get_patch_closest_to_anchor_object(cups, cat)",
        canon_box(best));
  }
  {
    double total = 0;
    for (const auto& p : people) total += p.x1 - p.x0;
    add("street", "total = 0\nfor p in image.find('person'):\n    total += p.width\nreturn total",
        canon_number(total));
  }
  {
    bool red = false, purple = false;
    for (const auto& o : street.objects) {
      if (o.name != "jacket" || o.confidence < kThreshold) continue;
      for (const auto& a : o.attributes) {
        red = red || a == "red";
        purple = purple || a == "purple";
      }
    }
    add("street", "return image.verify_property('jacket', 'red')", canon_bool(red));
    add("street", "return verify_property(image, 'jacket', 'purple')", canon_bool(purple));
  }
  {
    BBox front = people[0];
    for (const auto& p : people)
      if (pixel_depth(street, p) < pixel_depth(street, front)) front = p;
    add("street", "return sort_patches_front_to_back(image.find('person'))[0]", canon_box(front));
  }
  add("street", "return get_middle_patch(image.find('person'))",
      canon_box(people_lr[(people_lr.size() - 1) / 2]));
  {
    const BBox dog = boxes(park, "dog")[0];
    std::vector<BBox> left;
    for (const auto& b : boxes(park, "ball"))
      if (center_x(b) < dog.x0) left.push_back(b);
    add("park", "dog = image.find('dog')[0]\nreturn get_patch_left_of(image.find('ball'), dog)",
        list_of(left));
    add("park", "return image.find('dog')[0]", canon_box(dog));
  }
  {
    const BBox table = boxes(kitchen, "table")[0];
    std::vector<BBox> above;
    for (const auto& c : cups)
      if (center_y(c) < table.y0) above.push_back(c);
    add("kitchen",
        "table = image.find('table')[0]\nreturn get_patch_above_of(image.find('cup'), table)",
        list_of(above));
  }
  {
    const auto query = words("red cup");
    BBox best = cups[0];
    int best_score = -1;
    for (const auto& c : cups) {
      const int s = shared_words(query, description(object_at(kitchen, c)));
      if (s > best_score) {
        best = c;
        best_score = s;
      }
    }
    add("kitchen", "return best_image_match(image.find('cup'), 'red cup')", canon_box(best));
  }
  {
    const std::vector<std::string> texts{"a blue cup", "a red cup"};
    const auto desc = description(object_at(kitchen, cups[0]));
    std::string best = texts[0];
    int best_score = -1;
    for (const auto& t : texts) {
      const int s = shared_words(words(t), desc);
      if (s > best_score) {
        best = t;
        best_score = s;
      }
    }
    add("kitchen", "return best_text_match(image.find('cup')[0], ['a blue cup', 'a red cup'])",
        canon_string(best));
  }
  add("street", "return sort_patches_left_to_right(image.find('person'))[1:3]",
      list_of({people_lr[1], people_lr[2]}));
  add("park", "return image.find('cat')", canon_error("ToolError"));
  add("street", "return image.find('person')[10]", canon_error("IndexError"));
  {
    int pairs = 0;
    for (const auto& a : people)
      for (const auto& b : people) pairs += center_x(a) < center_x(b);
    add("street",
        "people = image.find('person')\ncount = 0\nfor a in people:\n    for b in people:\n"
        "        if a.horizontal_center < b.horizontal_center:\n            count += 1\n"
        "return count",
        canon_number(pairs));
  }
  {
    double best = 0;
    for (const auto& p : people) best = std::max(best, center_x(p));
    add("street",
        "best = 0\nfor p in image.find('person'):\n    best = max(best, p.horizontal_center)\n"
        "return best",
        canon_number(best));
  }
  add("street", "return image.find('car')[0].compute_depth()",
      canon_number(pixel_depth(street, boxes(street, "car")[0])));
  {
    const BBox a = people_lr[0], b = people_lr[1];
    const double dx = std::max({0.0, b.x0 - a.x1, a.x0 - b.x1});
    const double dy = std::max({0.0, b.y0 - a.y1, a.y0 - b.y1});
    add("street",
        "ps = sort_patches_left_to_right(image.find('person'))\nreturn distance(ps[0], ps[1])",
        canon_number(std::hypot(dx, dy)));
  }
  add("kitchen", "return sort_patches_bottom_to_top(image.find('cup'))[0]",
      canon_box(by_key(cups, neg_center_y)[0]));
  add("street", "return image.simple_query('What color is the jacket?')",
      canon_string(street.qa.at("what color is the jacket?")));
  {
    bool cat_in_cup = false;
    for (const auto& o : kitchen.objects)
      if (o.name == "cat" && o.confidence >= kThreshold && overlaps(o.box, cups[0])) cat_in_cup = true;
    add("kitchen", "cup = image.find('cup')[0]\nreturn cup.exists('cat')", canon_bool(cat_in_cup));
  }
  add("street", "while True:\n    pass\nreturn 1", canon_error("ParseError"));
  add("kitchen", "c = image.find('cup')[0]\nreturn c.left + c.width * 2",
      canon_number(cups[0].x0 + (cups[0].x1 - cups[0].x0) * 2));
  {
    add("street",
        "out = []\nfor p in sort_patches_left_to_right(image.find('person')):\n"
        "    if p.verify_property('person', 'standing'):\n        out = out + ['standing']\n"
        "    else:\n        out = out + ['other']\nreturn out",
        [&] {
          std::vector<std::string> items;
          for (const auto& b : people_lr) {
            const auto& attrs = object_at(street, b).attributes;
            const bool standing = std::find(attrs.begin(), attrs.end(), "standing") != attrs.end();
            items.push_back(canon_string(standing ? "standing" : "other"));
          }
          return canon_list(items);
        }());
  }
  return cases;
}

}  // namespace vpe::oracle
