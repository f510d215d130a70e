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

#include "doctest.h"
#include "unit/helpers.hpp"
#include "vpe/dataset.hpp"
#include "vpe/self_correct.hpp"

using namespace vpe;

namespace {

SceneFixture park() {
  return test::make_scene("park", 300, 240,
                          {test::obj("dog", {100, 120, 180, 200}, 0.12, 4),
                           test::obj("ball", {20, 200, 40, 220}, 0.8, 5)});
}

struct Fixture {
  FixtureBackend backend = test::backend_for({park()});
  llm::MockGenerator mock{"mock"};
  RunSetup setup;
  lang::ExecutionInput input{full_patch(park()), "the dog", {}, "bounding-box"};

  Fixture() {
    setup.backend = &backend;
    setup.generator = &mock;
    setup.generation.temperature = 0;
    setup.keep_prompts = true;
  }

  RunResult run(const RetryPolicy& p, const std::string& query = "the dog") const {
    return run_with_retries(query, input, TaskKind::Grounding, {}, p, setup);
  }
};

}  // namespace

TEST_CASE("next_threshold advances and floors") {
  const std::vector<double> s{0.15, 0.10, 0.05};
  CHECK(next_threshold(s, 0) == std::pair<double, std::size_t>{0.10, 1});
  CHECK(next_threshold(s, 1) == std::pair<double, std::size_t>{0.05, 2});
  CHECK(next_threshold(s, 2) == std::pair<double, std::size_t>{0.05, 2});
  const std::vector<double> one{0.3};
  CHECK(next_threshold(one, 0) == std::pair<double, std::size_t>{0.3, 0});
}

TEST_CASE("policy validation") {
  CHECK(RetryPolicy{}.valid());
  CHECK_FALSE(RetryPolicy{.max_trials = 0}.valid());
  CHECK_FALSE(RetryPolicy{.threshold_schedule = {0.1, 0.2}}.valid());
  CHECK_FALSE(RetryPolicy{.threshold_schedule = {}}.valid());
  CHECK_FALSE(RetryPolicy{.threshold_schedule = {1.5}}.valid());
}

TEST_CASE("self-tuning recovers a low-confidence detection") {
  Fixture f;
  f.mock.set_default("return image.find('dog')[0]\n");
  RetryPolicy p{.max_trials = 5, .tune_detection = true, .threshold_schedule = {0.15, 0.10}};
  const RunResult r = f.run(p);
  REQUIRE(r.trials.size() == 2);
  CHECK(r.trials[0].threshold_used == 0.15);
  REQUIRE(r.trials[0].bucket.has_value());
  CHECK(*r.trials[0].bucket == lang::ErrorBucket::ObjDet);
  CHECK(r.trials[1].threshold_used == 0.10);
  CHECK(r.trials[1].outcome.ok());
  REQUIRE(r.succeeded_at.has_value());
  CHECK(*r.succeeded_at == 2);
  const double score = score_program(r.final_outcome, BBox{100, 120, 180, 200},
                                     TaskKind::Grounding);
  CHECK(score == 1.0);
}

TEST_CASE("thresholds only move on detector failures and never increase") {
  Fixture f;
  f.mock.set_default("return image.find('dog')[0]\n");
  llm::MockGenerator::Rule bad;
  bad.query = "the dog";
  bad.seed = 0;
  bad.code = "return foo\n";
  f.mock.add_rule(bad);
  RetryPolicy p{.max_trials = 5, .tune_detection = true};
  const RunResult r = f.run(p);
  REQUIRE(r.trials.size() == 3);
  CHECK(*r.trials[0].bucket == lang::ErrorBucket::Other);
  CHECK(r.trials[0].threshold_used == 0.15);
  CHECK(r.trials[1].threshold_used == 0.15);
  CHECK(*r.trials[1].bucket == lang::ErrorBucket::ObjDet);
  CHECK(r.trials[2].threshold_used == 0.10);
  for (std::size_t i = 1; i < r.trials.size(); ++i)
    CHECK(r.trials[i].threshold_used <= r.trials[i - 1].threshold_used);
}

TEST_CASE("without tuning the configured threshold is used throughout") {
  Fixture f;
  f.setup.tools.detection_threshold = 0.2;
  f.mock.set_default("return image.find('dog')[0]\n");
  const RunResult r = f.run(RetryPolicy{.max_trials = 3});
  CHECK(r.trials.size() == 3);
  for (const auto& t : r.trials) CHECK(t.threshold_used == 0.2);
  CHECK_FALSE(r.final_outcome.ok());
  CHECK_FALSE(r.succeeded_at.has_value());
}

TEST_CASE("trial records are contiguous, seeded and stop at success") {
  Fixture f;
  f.setup.generation.seed = 10;
  f.mock.set_default("return 1\n");
  llm::MockGenerator::Rule good;
  good.query = "the dog";
  good.seed = 13;
  good.code = "return image.find('ball')[0]\n";
  f.mock.add_rule(good);
  const RunResult r = f.run(RetryPolicy{.max_trials = 5});
  REQUIRE(r.trials.size() == 4);
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    CHECK(r.trials[i].trial_index == int(i) + 1);
    CHECK(r.trials[i].seed_used == 10 + std::int64_t(i));
    CHECK(r.trials[i].template_id == llm::kDefaultTemplate);
    CHECK(r.trials[i].fingerprint ==
          llm::prompt_fingerprint(llm::kDefaultTemplate, "the dog", 0, 10 + std::int64_t(i)));
  }
  for (std::size_t i = 0; i + 1 < r.trials.size(); ++i)
    CHECK(*r.trials[i].bucket == lang::ErrorBucket::RetType);
  CHECK(r.final_outcome.ok());
  CHECK(*r.succeeded_at == 4);
}

TEST_CASE("self_debug prompts carry the previous program") {
  Fixture f;
  f.mock.set_default("return image.find('cat')[0]\n");
  RetryPolicy p{.max_trials = 3, .strategy = RetryStrategy::SelfDebug};
  const RunResult r = f.run(p);
  REQUIRE(r.trials.size() == 3);
  CHECK(r.trials[0].template_id == llm::kDefaultTemplate);
  for (std::size_t i = 1; i < r.trials.size(); ++i) {
    CHECK(r.trials[i].template_id == llm::kDebugTemplate);
    CHECK(r.trials[i].prompt.find(r.trials[i - 1].code) != std::string::npos);
    CHECK(r.trials[i].prompt.find("ToolError") != std::string::npos);
  }
}

TEST_CASE("generator failures are recorded as trials") {
  Fixture f;
  const RunResult r = f.run(RetryPolicy{.max_trials = 2});
  REQUIRE(r.trials.size() == 2);
  CHECK(r.trials[0].outcome.error().tool == "generator");
  CHECK_FALSE(r.final_outcome.ok());
}

TEST_CASE("final outcome is normalized to the task result kind") {
  Fixture f;
  f.mock.set_default("return image.find('ball')\n");
  const RunResult r = f.run(RetryPolicy{.max_trials = 1});
  REQUIRE(r.final_outcome.ok());
  CHECK(r.final_outcome.value().is<ImagePatch>());
}

TEST_CASE("trial json has the transcript fields") {
  Fixture f;
  f.mock.set_default("return image.find('ball')[0]\n");
  const RunResult r = f.run(RetryPolicy{.max_trials = 1});
  const auto j = trial_to_json(r.trials[0]);
  CHECK(j["trial_index"] == 1);
  CHECK(j["ok"] == true);
  CHECK(j["fingerprint"].get<std::string>().size() == 16);
  CHECK(j.contains("threshold_used"));
  CHECK(j["value"]["box"] == nlohmann::json::array({20.0, 200.0, 40.0, 220.0}));
}
