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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance/oracle_eval.hpp"
#include "unit/helpers.hpp"
#include "vpe/abstract_api.hpp"
#include "vpe/ace.hpp"
#include "vpe/eval.hpp"
#include "vpe/lang/interpreter.hpp"
#include "vpe/self_correct.hpp"
#include "vpe/toolkit.hpp"

using namespace vpe;
namespace fs = std::filesystem;

namespace {

// Collects the first few mismatches of a criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  void note(const std::string& s) { summary_ = s; }
  bool ok() const { return failures_ == 0 && checks_ > 0; }
  std::string detail() const {
    std::string out = summary_;
    if (failures_ > 0) {
      out += (out.empty() ? "" : "; ") + std::to_string(failures_) + " of " +
             std::to_string(checks_) + " checks failed";
      for (const auto& n : notes_) out += "; " + n;
    }
    return out;
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::vector<std::string> notes_;
  std::string summary_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string canon(const lang::Value& v) {
  using namespace oracle;
  if (v.is<bool>()) return canon_bool(v.as<bool>());
  if (v.is_number()) return canon_number(v.as_double());
  if (v.is<std::string>()) return canon_string(v.as<std::string>());
  if (const auto* p = v.get_if<ImagePatch>()) return canon_box(p->box);
  if (v.is<lang::ListPtr>()) {
    std::vector<std::string> items;
    for (const auto& x : v.list()) items.push_back(canon(x));
    return canon_list(items);
  }
  return lang::to_repr(v);
}

std::string canon(const lang::ExecutionOutcome& out) {
  if (!out.ok()) return oracle::canon_error(lang::to_string(out.error().cls));
  return canon(out.value());
}

ImagePatch rpatch(const BBox& b) { return {"r", b, {}}; }

// ---------------------------------------------------------------------------

void iou_oracle(Checker& c) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(0, 100);
  auto random_box = [&] {
    int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    return BBox{double(x0), double(y0), double(x1), double(y1)};
  };
  const auto start = Clock::now();
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const BBox a = random_box(), b = random_box();
    long inter = 0, uni = 0;
    for (int y = 0; y < 100; ++y) {
      for (int x = 0; x < 100; ++x) {
        const bool in_a = x >= a.x0 && x < a.x1 && y >= a.y0 && y < a.y1;
        const bool in_b = x >= b.x0 && x < b.x1 && y >= b.y0 && y < b.y1;
        inter += in_a && in_b;
        uni += in_a || in_b;
      }
    }
    const double want = uni == 0 ? 0.0 : double(inter) / double(uni);
    const double diff = std::abs(iou(a, b) - want);
    worst = std::max(worst, diff);
    c.expect(diff <= 1e-12, "iou(" + to_string(a) + ", " + to_string(b) + ") = " +
                                fmt(iou(a, b)) + ", pixels give " + fmt(want));
  }
  const double secs = seconds_since(start);
  c.expect(secs < 5, "took " + fmt(secs) + " s");
  c.note("1000 pairs, max |diff| " + fmt(worst) + ", " + fmt(secs) + " s");
}

void interpreter_conformance(Checker& c) {
  const auto start = Clock::now();
  std::map<std::string, SceneFixture> scenes;
  SceneRegistry registry;
  for (const char* name : {"street", "kitchen", "park"}) {
    scenes[name] = load_scene_fixture(test::data_path(std::string("fixtures/") + name + ".json"));
    registry.add_scene(scenes[name]);
  }
  const FixtureBackend backend(std::move(registry));
  const auto tools = make_dispatch_table(backend, ToolConfig{}, ApiVariant::Abstract);
  const lang::ExecutionLimits limits;

  const auto cases = oracle::canned_cases(scenes);
  c.expect(cases.size() >= 20, "only " + std::to_string(cases.size()) + " canned programs");
  for (const auto& k : cases) {
    const lang::ExecutionInput input{full_patch(scenes.at(k.scene)), "q", {}, "value"};
    const std::string got = canon(lang::run_source(k.source, input, tools, limits));
    c.expect(got == k.expected, "program `" + k.source + "` gave " + got + ", oracle " + k.expected);
  }

  // Fuzz: token soup and mutated canned programs.
  const char* atoms[] = {"x", "y", "=", "(", ")", "[", "]", ":", "\n", "    ", "for", "in",
                         "if", "else", "return", "0", "1", "-1", "2.5", "1e308", "'s'", "+",
                         "-", "*", "/", "//", "%", "**", ",", ".", "image", "find", "range",
                         "len", "not", "and", "or", "==", "<", "while", "import", "def",
                         "lambda", "None", "True", "'person'", "sort_patches_left_to_right",
                         "get_middle_patch", "x = x + [x]\n", "for i in range(9999):\n    "};
  std::mt19937_64 rng(11);
  lang::ExecutionLimits fuzz_limits;
  fuzz_limits.wall_clock = std::chrono::milliseconds(2000);
  const ImagePatch street_image = full_patch(scenes.at("street"));
  const lang::ExecutionInput fuzz_input{street_image, "q", {}, "value"};
  double slowest = 0;
  int classified = 0;
  std::map<std::string, int> by_class;
  for (int n = 0; n < 10000; ++n) {
    std::string src;
    if (n % 3 == 2) {
      // Well-formed programs that run loops, grow lists and call tools.
      const char* stmts[] = {
          "x = x + [len(x)]\n",
          "for i in range(@):\n    x = x + [i]\n",
          "for i in range(@):\n    for j in range(@):\n        y = y + i * j\n",
          "x = x * @\n",
          "y = y ** @\n",
          "y = y // (@ - @)\n",
          "x = image.find('person')\n",
          "x = sort_patches_left_to_right(image.find('jacket'))\n",
          "y = x[@]\n",
          "x = x[@:@]\n",
          "y = get_middle_patch(x)\n",
          "if len(x) > @:\n    y = x[0].compute_depth()\nelse:\n    y = 'none'\n",
          "x = str(y) * @\n",
          "y = image.find('car')[0].find('person')\n"};
      const int sizes[] = {0, 1, 2, 3, 7, 100, 5000, 20000, 1000000};
      src = "x = [1, 2]\ny = 3\n";
      const int len = 1 + int(rng() % 5);
      for (int i = 0; i < len; ++i) {
        std::string st = stmts[rng() % std::size(stmts)];
        for (std::size_t at; (at = st.find('@')) != std::string::npos;)
          st.replace(at, 1, std::to_string(sizes[rng() % std::size(sizes)]));
        src += st;
      }
      src += "return y\n";
    } else if (n % 3 == 0) {
      const int len = 1 + int(rng() % 30);
      for (int i = 0; i < len; ++i) src += std::string(atoms[rng() % std::size(atoms)]) + " ";
    } else {
      src = cases[rng() % cases.size()].source;
      const int edits = 1 + int(rng() % 3);
      for (int e = 0; e < edits && !src.empty(); ++e) {
        const std::size_t pos = rng() % src.size();
        switch (rng() % 3) {
          case 0: src.erase(pos, 1 + rng() % 4); break;
          case 1: src.insert(pos, atoms[rng() % std::size(atoms)]); break;
          default: src[pos] = static_cast<char>(32 + rng() % 95); break;
        }
      }
    }
    const auto t0 = Clock::now();
    const auto out = lang::run_source(src, fuzz_input, tools, fuzz_limits);
    slowest = std::max(slowest, seconds_since(t0));
    ++by_class[out.ok() ? "ok" : lang::to_string(out.error().cls)];
    if (out.ok()) {
      ++classified;
    } else {
      const bool known = lang::error_class_from_string(lang::to_string(out.error().cls)).has_value();
      (void)lang::classify_error(out.error());
      classified += known;
      c.expect(known, "unclassified failure for `" + src + "`");
    }
  }
  c.expect(classified == 10000, "classified " + std::to_string(classified) + " of 10000");
  c.expect(slowest <= 2.5, "slowest fuzz input took " + fmt(slowest) + " s");
  const double secs = seconds_since(start);
  c.expect(secs < 60, "took " + fmt(secs) + " s");
  std::string mix;
  for (const auto& [k, n] : by_class) mix += (mix.empty() ? "" : " ") + k + "=" + std::to_string(n);
  c.note(std::to_string(cases.size()) + " canned programs, 10000 fuzz inputs (" + mix +
         "), slowest " + fmt(slowest) + " s, " + fmt(secs) + " s");
}

// Brute-force ordering: the element with `rank` smaller keys, ties by position.
std::vector<ImagePatch> brute_sort(const std::vector<ImagePatch>& ps,
                                   const std::vector<double>& keys) {
  std::vector<ImagePatch> out(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::size_t rank = 0;
    for (std::size_t j = 0; j < ps.size(); ++j)
      rank += keys[j] < keys[i] || (keys[j] == keys[i] && j < i);
    out[rank] = ps[i];
  }
  return out;
}

void abstract_routines(Checker& c) {
  const auto start = Clock::now();
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coord(0, 100);
  for (int s = 0; s < 500; ++s) {
    const int n = 1 + int(rng() % 8);
    std::vector<SceneObject> objects;
    std::vector<ImagePatch> ps;
    while (int(ps.size()) < n) {
      int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
      if (x0 == x1 || y0 == y1) continue;
      if (x0 > x1) std::swap(x0, x1);
      if (y0 > y1) std::swap(y0, y1);
      const BBox b{double(x0), double(y0), double(x1), double(y1)};
      objects.push_back(test::obj("thing", b, 0.9, double(1 + rng() % 20)));
      ps.push_back(rpatch(b));
    }
    SceneFixture scene = test::make_scene("r", 100, 100, objects);
    const FixtureBackend backend = test::backend_for({scene});
    const std::string tag = "scene " + std::to_string(s);

    for (const auto& anchor : ps) {
      const std::pair<api::Direction, std::function<bool(const BBox&)>> dirs[] = {
          {api::Direction::LeftOf, [&](const BBox& b) { return b.x0 + b.x1 < 2 * anchor.box.x0; }},
          {api::Direction::RightOf, [&](const BBox& b) { return b.x0 + b.x1 > 2 * anchor.box.x1; }},
          {api::Direction::AboveOf, [&](const BBox& b) { return b.y0 + b.y1 < 2 * anchor.box.y0; }},
          {api::Direction::BelowOf, [&](const BBox& b) { return b.y0 + b.y1 > 2 * anchor.box.y1; }},
      };
      for (const auto& [d, beyond] : dirs) {
        std::vector<ImagePatch> want;
        for (const auto& p : ps)
          if (!(p.box == anchor.box) && beyond(p.box)) want.push_back(p);
        c.expect(api::get_patches_in_direction(ps, anchor, d) == want,
                 tag + ": " + api::to_string(d));
      }

      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < ps.size(); ++i)
        if (!(ps[i].box == anchor.box)) candidates.push_back(i);
      if (candidates.empty()) continue;
      auto dist2 = [&](std::size_t i) {
        const double dx = (ps[i].box.x0 + ps[i].box.x1) - (anchor.box.x0 + anchor.box.x1);
        const double dy = (ps[i].box.y0 + ps[i].box.y1) - (anchor.box.y0 + anchor.box.y1);
        return dx * dx + dy * dy;
      };
      std::size_t want = candidates.front();
      for (std::size_t i : candidates) {
        bool beats_all = true;
        for (std::size_t j : candidates)
          if (j != i && !(dist2(i) < dist2(j) || (dist2(i) == dist2(j) && i < j))) beats_all = false;
        if (beats_all) want = i;
      }
      c.expect(api::get_patch_closest_to_anchor_object(ps, anchor) == ps[want], tag + ": closest");
    }

    std::vector<double> kx, ky, kd;
    for (const auto& p : ps) {
      kx.push_back(p.box.x0 + p.box.x1);
      ky.push_back(-(p.box.y0 + p.box.y1));
      kd.push_back(oracle::pixel_depth(scene, p.box));
    }
    const auto lr = brute_sort(ps, kx);
    c.expect(api::sort_patches_left_to_right(ps) == lr, tag + ": left to right");
    c.expect(api::sort_patches_bottom_to_top(ps) == brute_sort(ps, ky), tag + ": bottom to top");
    c.expect(api::sort_patches_front_to_back(ps, backend) == brute_sort(ps, kd),
             tag + ": front to back");
    c.expect(api::get_middle_patch(ps) == lr[(lr.size() - 1) / 2], tag + ": middle");
  }

  // Temporal routines: of, before and after tile the segment.
  const ToolConfig cfg;
  int videos = 0;
  for (int v = 0; v < 200; ++v) {
    auto video = std::make_shared<VideoFixture>();
    video->video_id = "v" + std::to_string(v);
    const int len = 5 + int(rng() % 36);
    for (int f = 0; f < len; ++f)
      video->frames.push_back(test::make_scene(video->video_id + "_" + std::to_string(f), 10, 10, {}));
    const int n_events = 1 + int(rng() % 4);
    for (int e = 0; e < n_events; ++e) {
      int a = int(rng() % len), b = int(rng() % len);
      if (a > b) std::swap(a, b);
      video->events.push_back({"e" + std::to_string(e) + "a e" + std::to_string(e) + "b", a, b});
    }
    video->caption = "clip";
    const VideoFixture& vf = *video;
    const std::shared_ptr<const VideoFixture> shared = video;
    int s0 = int(rng() % len), s1 = int(rng() % len);
    if (s0 > s1) std::swap(s0, s1);
    const VideoSegment seg(shared, s0, s1);
    const std::size_t target = rng() % vf.events.size();
    const VideoEvent& ev = vf.events[target];
    const bool inside = !(ev.end < s0 || ev.start > s1);
    const std::string tag = "video " + std::to_string(v);

    auto piece = [&](auto fn) -> std::optional<VideoSegment> {
      try {
        return fn(seg, ev.text, cfg);
      } catch (const lang::VplException&) {
        return std::nullopt;
      }
    };
    const auto of = piece(api::get_video_segment_of_event);
    const auto before = piece(api::get_video_segment_before_event);
    const auto after = piece(api::get_video_segment_after_event);
    if (!inside) {
      c.expect(!of && !before && !after, tag + ": event outside the segment was located");
      continue;
    }
    ++videos;
    std::vector<int> hits(len, 0);
    for (const auto& p : {before, of, after}) {
      if (!p) continue;
      c.expect(p->start_frame() <= p->end_frame(), tag + ": empty piece");
      for (int f = p->start_frame(); f <= p->end_frame(); ++f) ++hits[f];
    }
    c.expect(of.has_value(), tag + ": event not located");
    for (int f = 0; f < len; ++f) {
      const bool in_seg = f >= s0 && f <= s1;
      c.expect(hits[f] == (in_seg ? 1 : 0), tag + ": frame " + std::to_string(f) + " covered " +
                                                std::to_string(hits[f]) + " times");
    }
  }
  const double secs = seconds_since(start);
  c.expect(secs < 30, "took " + fmt(secs) + " s");
  c.note("500 scenes, " + std::to_string(videos) + " of 200 videos with the event in range, " +
         fmt(secs) + " s");
}

void second_from_right(Checker& c) {
  const auto mock = llm::MockGenerator::load(test::data_path("mock_script.json"));
  std::mt19937_64 rng(5);
  std::string got_all;
  for (int n = 2; n <= 10; ++n) {
    std::vector<SceneObject> objs;
    for (int x = 1; x <= n; ++x) objs.push_back(test::obj("person", {x - 0.25, 0, x + 0.25, 1}));
    std::shuffle(objs.begin(), objs.end(), rng);
    const SceneFixture scene = test::make_scene("lineup", 12, 2, objs);
    const FixtureBackend backend = test::backend_for({scene});
    RunSetup setup;
    setup.backend = &backend;
    setup.generator = &mock;
    setup.generation.temperature = 0;
    const lang::ExecutionInput input{full_patch(scene), "second person from the right", {},
                                     "bounding-box"};
    const auto r = run_with_retries("second person from the right", input, TaskKind::Grounding,
                                    {}, RetryPolicy{.max_trials = 1}, setup);
    const bool ok = r.final_outcome.ok() && r.final_outcome.value().is<ImagePatch>();
    const double x = ok ? r.final_outcome.value().as<ImagePatch>().horizontal_center() : -1;
    c.expect(ok && x == n - 1,
             "n=" + std::to_string(n) + " returned " + canon(r.final_outcome));
  }
  c.note("n = 2..10");
}

void ace_bootstrap(Checker& c) {
  const std::set<int> correct{1, 4, 6, 9, 13};
  const auto syn = test::make_synthetic(16, correct, {0, 2, 7});
  const FixtureBackend backend(syn.media.registry());
  RunSetup setup;
  setup.backend = &backend;
  setup.generator = &syn.mock;
  setup.generation.temperature = 0;
  auto boot = [&](int k) {
    BootstrapOptions o;
    o.k = k;
    return bootstrap_aces(syn.examples, syn.media, setup, o).store;
  };

  const AceStore full = boot(16);
  std::set<std::string> want, got;
  for (int i : correct) want.insert("the item" + std::to_string(i));
  for (const auto& e : full.entries) got.insert(e.query);
  c.expect(full.entries.size() == 5 && got == want,
           "store holds " + std::to_string(full.entries.size()) + " entries");
  for (int k = 1; k < 5; ++k) {
    const AceStore small = boot(k);
    c.expect(small.entries.size() == std::size_t(k) &&
                 std::equal(small.entries.begin(), small.entries.end(), full.entries.begin()),
             "k=" + std::to_string(k) + " is not a prefix");
  }
  c.expect(boot(16).to_json() == full.to_json(), "rerun differs");

  RunSetup prompt_setup = setup;
  prompt_setup.keep_prompts = true;
  const auto ices = full.ices();
  const auto& ex = syn.examples[3];
  const auto run = run_with_retries(ex.query, syn.media.input_for(ex), TaskKind::Grounding, ices,
                                    RetryPolicy{.max_trials = 1}, prompt_setup);
  for (const auto& e : full.entries) {
    const std::string& prompt = run.trials.front().prompt;
    c.expect(prompt.find(e.query) != std::string::npos && prompt.find(e.code) != std::string::npos,
             "prompt lacks the entry for " + e.query);
  }

  // ACE effect through the eval harness.
  test::TempDir dir("acceptance_ace");
  test::write_file(dir / "row.json", serialize_scene_fixture(*syn.media.registry().scene("row")));
  test::write_file(dir / "data.jsonl", serialize_dataset(syn.examples));
  full.save(dir / "aces.json");
  EvalConfig cfg;
  cfg.dataset = dir / "data.jsonl";
  cfg.generation.temperature = 0;
  cfg.policy.max_trials = 1;
  cfg.ace_store = dir / "aces.json";
  EvalEnvironment env;
  env.generator = &syn.mock;
  SweepGrid grid;
  grid.aces = {false, true};
  const auto cells = run_sweep(cfg, grid, env);
  const double zero = cells.at(0).output.report.summary.mean;
  const double with = cells.at(1).output.report.summary.mean;
  c.expect(with > zero, "with ACEs " + fmt(with) + " is not above zero-shot " + fmt(zero));
  c.note("5 of 16 stored, zero-shot " + fmt(zero) + ", with ACEs " + fmt(with));
}

void self_tuning(Checker& c) {
  const SceneFixture park = load_scene_fixture(test::data_path("fixtures/park.json"));
  const FixtureBackend park_backend = test::backend_for({park});
  const auto mock = llm::MockGenerator::load(test::data_path("mock_script.json"));
  RunSetup setup;
  setup.backend = &park_backend;
  setup.generator = &mock;
  setup.generation.temperature = 0;
  const lang::ExecutionInput input{full_patch(park), "the dog", {}, "bounding-box"};
  const auto r = run_with_retries(
      "the dog", input, TaskKind::Grounding, {},
      RetryPolicy{.max_trials = 5, .tune_detection = true, .threshold_schedule = {0.15, 0.10}},
      setup);
  c.expect(r.trials.size() == 2, std::to_string(r.trials.size()) + " trials");
  if (r.trials.size() == 2) {
    c.expect(r.trials[0].bucket == lang::ErrorBucket::ObjDet && r.trials[0].threshold_used == 0.15,
             "trial 1 was not an ObjDet failure at 0.15");
    c.expect(r.trials[1].outcome.ok() && r.trials[1].threshold_used == 0.10,
             "trial 2 did not run at 0.10");
  }
  c.expect(score_program(r.final_outcome, BBox{100, 120, 180, 200}, TaskKind::Grounding) == 1.0,
           "final IoU is not 1.0");

  llm::MockGenerator dog_mock("dog-mock");
  dog_mock.set_default("return image.find('dog')[0]\n");
  std::vector<int> successes;
  for (int max_trials = 1; max_trials <= 5; ++max_trials) {
    int ok = 0;
    for (int i = 0; i < 20; ++i) {
      const double conf = 0.02 + 0.01 * i;
      const SceneFixture s =
          test::make_scene("s" + std::to_string(i), 100, 100, {test::obj("dog", {10, 10, 50, 50}, conf)});
      const FixtureBackend b = test::backend_for({s});
      RunSetup st;
      st.backend = &b;
      st.generator = &dog_mock;
      st.generation.temperature = 0;
      const lang::ExecutionInput in{full_patch(s), "the dog", {}, "bounding-box"};
      const auto run = run_with_retries(
          "the dog", in, TaskKind::Grounding, {},
          RetryPolicy{.max_trials = max_trials, .tune_detection = true,
                      .threshold_schedule = {0.15, 0.10, 0.05}},
          st);
      ok += score_program(run.final_outcome, BBox{10, 10, 50, 50}, TaskKind::Grounding) == 1.0;
    }
    successes.push_back(ok);
  }
  std::string counts;
  for (std::size_t i = 0; i < successes.size(); ++i) {
    counts += (i ? "," : "") + std::to_string(successes[i]);
    if (i > 0) c.expect(successes[i] >= successes[i - 1], "success count decreased");
  }
  c.expect(successes.back() > successes.front(), "tuning never helped");
  c.note("successes for max_trials 1..5: " + counts);
}

EvalConfig fixture_eval_config() {
  EvalConfig c;
  c.dataset = test::data_path("grounding.jsonl");
  c.kind = TaskKind::Grounding;
  c.generation.temperature = 0;
  c.policy.max_trials = 3;
  c.policy.tune_detection = true;
  c.seeds = {0, 1, 2};
  return c;
}

double fraction_sum(const Histogram& h) {
  double s = 0;
  for (std::size_t i = 0; i < kNumBins; ++i) s += h.fraction(static_cast<Bin>(i));
  return s;
}

void error_analysis_check(Checker& c) {
  using lang::ErrorBucket;
  const std::vector<SampleOutcome> s{
      {false, ErrorBucket::ObjDet, 0}, {false, ErrorBucket::ObjDet, 0},
      {false, ErrorBucket::RetType, 0}, {false, ErrorBucket::Other, 0},
      {true, ErrorBucket::Other, 0.0},  {true, ErrorBucket::Other, 0.4},
      {true, ErrorBucket::Other, 0.75}, {true, ErrorBucket::Other, 1.0}};
  const Histogram h = error_analysis(s);
  const std::pair<Bin, double> want[] = {{Bin::ObjDet, 0.25}, {Bin::RetType, 0.125},
                                         {Bin::Other, 0.125}, {Bin::Zero, 0.125},
                                         {Bin::UpTo03, 0.0},  {Bin::UpTo05, 0.125},
                                         {Bin::UpTo07, 0.0},  {Bin::UpTo1, 0.25}};
  for (const auto& [b, f] : want)
    c.expect(h.fraction(b) == f, std::string(bin_label(b)) + " fraction " + fmt(h.fraction(b)));

  int runs = 1;
  c.expect(std::abs(fraction_sum(h) - 1) <= 1e-9, "constructed set does not sum to 1");
  std::mt19937_64 rng(3);
  for (int r = 0; r < 200; ++r, ++runs) {
    std::vector<SampleOutcome> xs(1 + rng() % 50);
    for (auto& x : xs) {
      x.ok = rng() % 2;
      x.bucket = static_cast<ErrorBucket>(rng() % 3);
      x.score = double(rng() % 1001) / 1000;
    }
    c.expect(std::abs(fraction_sum(error_analysis(xs)) - 1) <= 1e-9, "random set off");
  }
  const auto mock = llm::MockGenerator::load(test::data_path("mock_script.json"));
  EvalEnvironment env;
  env.generator = &mock;
  for (bool tune : {false, true}) {
    EvalConfig cfg = fixture_eval_config();
    cfg.policy.tune_detection = tune;
    c.expect(std::abs(fraction_sum(run_eval(cfg, env).report.histogram) - 1) <= 1e-9,
             "fixture eval off");
    ++runs;
  }
  c.note("exact fractions on 8 samples; sums within 1e-9 on " + std::to_string(runs) + " runs");
}

void aggregation(Checker& c) {
  std::vector<double> v{0.4, 0.5, 0.6};
  const Aggregate a = aggregate(v);
  c.expect(std::abs(a.mean - 0.5) <= 1e-12, "mean " + fmt(a.mean));
  c.expect(std::abs(a.std - 0.1) <= 1e-12, "std " + fmt(a.std));
  std::sort(v.begin(), v.end());
  do {
    const Aggregate b = aggregate(v);
    c.expect(b.mean == a.mean && b.std == a.std, "permutation changed the result");
  } while (std::next_permutation(v.begin(), v.end()));

  const auto mock = llm::MockGenerator::load(test::data_path("mock_script.json"));
  EvalEnvironment env;
  env.generator = &mock;
  EvalConfig cfg = fixture_eval_config();
  const std::string base = run_eval(cfg, env).report.to_json();
  cfg.seeds = {2, 0, 1};
  c.expect(run_eval(cfg, env).report.to_json() == base, "seed order changed the report");
  cfg.seeds = {0, 1, 2};
  cfg.workers = 4;
  c.expect(run_eval(cfg, env).report.to_json() == base, "workers changed the report");
  c.note("mean " + fmt(a.mean) + ", std " + fmt(a.std) + "; workers 1 and 4 agree");
}

void determinism(Checker& c) {
  const auto mock = llm::MockGenerator::load(test::data_path("mock_script.json"));
  EvalEnvironment env;
  env.generator = &mock;
  const std::string first = run_eval(fixture_eval_config(), env).report.to_json();
  const std::string second = run_eval(fixture_eval_config(), env).report.to_json();
  c.expect(!first.empty() && first == second, "reports differ");
  c.note(std::to_string(first.size()) + " bytes, identical");
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)(Checker&)> criteria[] = {
      {"iou-oracle", iou_oracle},
      {"interpreter-conformance", interpreter_conformance},
      {"abstract-routine-oracle", abstract_routines},
      {"second-from-right", second_from_right},
      {"ace-bootstrap", ace_bootstrap},
      {"self-tuning", self_tuning},
      {"error-analysis", error_analysis_check},
      {"aggregation", aggregation},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Checker c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", c.ok() ? "PASS" : "FAIL", name, c.detail().c_str());
    std::fflush(stdout);
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}
