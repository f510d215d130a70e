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

#include "vpe/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "vpe/lang/ast.hpp"
#include "vpe/parallel.hpp"

namespace vpe {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string_view engine_version() { return VPE_VERSION; }

Aggregate aggregate(std::span<const double> values) {
  if (values.empty()) return {};
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0;
  for (double v : sorted) sum += v;
  const double n = static_cast<double>(sorted.size());
  Aggregate a;
  a.mean = sum / n;
  if (sorted.size() > 1) {
    double sq = 0;
    for (double v : sorted) sq += (v - a.mean) * (v - a.mean);
    a.std = std::sqrt(sq / (n - 1));
  }
  return a;
}

const char* bin_label(Bin b) {
  switch (b) {
    case Bin::ObjDet: return "ObjDet";
    case Bin::RetType: return "RetType";
    case Bin::Other: return "Other";
    case Bin::Zero: return "=0";
    case Bin::UpTo03: return "(0,0.3]";
    case Bin::UpTo05: return "(0.3,0.5]";
    case Bin::UpTo07: return "(0.5,0.7]";
    case Bin::UpTo1: return "(0.7,1]";
  }
  return "?";
}

Bin score_bin(double score) {
  if (score <= 0) return Bin::Zero;
  if (score <= 0.3) return Bin::UpTo03;
  if (score <= 0.5) return Bin::UpTo05;
  if (score <= 0.7) return Bin::UpTo07;
  return Bin::UpTo1;
}

double Histogram::fraction(Bin b) const {
  return total == 0 ? 0.0
                    : static_cast<double>(counts[static_cast<std::size_t>(b)]) /
                          static_cast<double>(total);
}

ojson Histogram::to_json() const {
  ojson bins = ojson::array();
  for (std::size_t i = 0; i < kNumBins; ++i) {
    const auto b = static_cast<Bin>(i);
    bins.push_back({{"bin", bin_label(b)}, {"count", counts[i]}, {"fraction", fraction(b)}});
  }
  return ojson{{"total", total}, {"bins", std::move(bins)}};
}

std::string Histogram::to_csv() const {
  std::string out = "bin,count,fraction\n";
  for (std::size_t i = 0; i < kNumBins; ++i) {
    const auto b = static_cast<Bin>(i);
    out += std::string(bin_label(b)) + "," + std::to_string(counts[i]) + "," +
           lang::format_float(fraction(b)) + "\n";
  }
  return out;
}

Histogram error_analysis(std::span<const SampleOutcome> samples) {
  Histogram h;
  for (const auto& s : samples) {
    Bin b;
    if (!s.ok) {
      b = s.bucket == lang::ErrorBucket::ObjDet    ? Bin::ObjDet
          : s.bucket == lang::ErrorBucket::RetType ? Bin::RetType
                                                   : Bin::Other;
    } else {
      b = score_bin(s.score);
    }
    ++h.counts[static_cast<std::size_t>(b)];
    ++h.total;
  }
  return h;
}

// ---------------------------------------------------------------------------

void EvalConfig::validate() const {
  if (dataset.empty()) throw std::invalid_argument("dataset.path is required");
  if (seeds.empty()) throw std::invalid_argument("eval.seeds must be nonempty");
  if (std::set<std::int64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("eval.seeds must be distinct");
  }
  if (!policy.valid()) {
    throw std::invalid_argument(
        "policy: max_trials must be >= 1 and threshold_schedule strictly decreasing in [0, 1]");
  }
  if (!tools.valid()) throw std::invalid_argument("tools: thresholds must lie in [0, 1]");
  if (!generation.valid()) {
    throw std::invalid_argument("generation: temperature must be >= 0, max_tokens > 0");
  }
  if (!limits.valid()) throw std::invalid_argument("limits: every limit must be positive");
  if (workers < 1) throw std::invalid_argument("eval.workers must be >= 1");
}

ojson EvalConfig::echo() const {
  std::vector<std::int64_t> sorted_seeds = seeds;
  std::sort(sorted_seeds.begin(), sorted_seeds.end());
  ojson schedule = ojson::array();
  for (double t : policy.threshold_schedule) schedule.push_back(t);
  return ojson{
      {"dataset", dataset.generic_string()},
      {"task_kind", kind ? ojson(to_string(*kind)) : ojson(nullptr)},
      {"api", to_string(api)},
      {"ace_store", ace_store ? ojson(ace_store->generic_string()) : ojson(nullptr)},
      {"use_aces", use_aces},
      {"ace_count", ace_count ? ojson(*ace_count) : ojson(nullptr)},
      {"policy",
       {{"max_trials", policy.max_trials},
        {"strategy", to_string(policy.strategy)},
        {"tune_detection", policy.tune_detection},
        {"threshold_schedule", schedule}}},
      {"generation",
       {{"temperature", generation.temperature},
        {"max_output_tokens", generation.max_output_tokens}}},
      {"tools",
       {{"detection_threshold", tools.detection_threshold},
        {"text_match_threshold", tools.text_match_threshold},
        {"strict_find", tools.strict_find}}},
      {"limits",
       {{"max_steps", limits.max_steps},
        {"max_loop_iterations", limits.max_loop_iterations},
        {"max_collection_length", limits.max_collection_length},
        {"wall_clock_ms", limits.wall_clock.count()}}},
      {"seeds", sorted_seeds},
  };
}

std::string Report::to_json() const {
  ojson seeds = ojson::array();
  for (const auto& s : per_seed) seeds.push_back({{"seed", s.seed}, {"score", s.score}});
  const ojson j{{"engine_version", engine_version},
                {"config", config},
                {"num_examples", num_examples},
                {"per_seed", std::move(seeds)},
                {"mean", summary.mean},
                {"std", summary.std},
                {"histogram", histogram.to_json()}};
  return j.dump(2) + "\n";
}

EvalOutput run_eval(const EvalConfig& config, const EvalEnvironment& env) {
  config.validate();
  if (!env.generator) throw std::invalid_argument("no generator configured");
  const auto examples = load_dataset(config.dataset, config.kind);
  if (examples.empty()) {
    throw std::invalid_argument("dataset " + config.dataset.string() + " has no examples");
  }
  const MediaLibrary media = MediaLibrary::load(examples, config.dataset.parent_path());

  std::vector<llm::Ice> ices;
  if (config.use_aces && config.ace_store) {
    ices = AceStore::load(*config.ace_store).ices(config.ace_count);
  }

  std::optional<FixtureBackend> fixture;
  const ToolBackend* backend = env.backend;
  if (!backend) backend = &fixture.emplace(media.registry());

  RunSetup base;
  base.backend = backend;
  base.tools = config.tools;
  base.api = config.api;
  base.generator = env.generator;
  base.generation = config.generation;
  base.templates = env.templates;
  base.limits = config.limits;

  std::vector<std::int64_t> seeds = config.seeds;
  std::sort(seeds.begin(), seeds.end());
  const std::size_t n_ex = examples.size();
  const std::size_t n_seed = seeds.size();

  struct Slot {
    RunResult run;
    double score = 0;
  };
  std::vector<Slot> slots(n_ex * n_seed);
  parallel_for(slots.size(), config.workers, [&](std::size_t i) {
    const auto& ex = examples[i / n_seed];
    RunSetup setup = base;
    setup.generation.seed = seeds[i % n_seed];
    Slot& slot = slots[i];
    slot.run = run_with_retries(ex.query, media.input_for(ex), ex.kind, ices, config.policy, setup);
    slot.score = score_program(slot.run.final_outcome, ex.ground_truth, ex.kind, ex.options);
  });

  EvalOutput out;
  Report& report = out.report;
  report.engine_version = std::string(engine_version());
  report.config = config.echo();
  report.config["generator"] = env.generator->id();
  report.config["backend"] = std::string(backend->kind());
  report.config["num_ices"] = ices.size();
  report.num_examples = n_ex;

  std::vector<double> seed_scores;
  for (std::size_t s = 0; s < n_seed; ++s) {
    double sum = 0;
    for (std::size_t e = 0; e < n_ex; ++e) sum += slots[e * n_seed + s].score;
    const double mean = sum / static_cast<double>(n_ex);
    report.per_seed.push_back({seeds[s], mean});
    seed_scores.push_back(mean);
  }
  report.summary = aggregate(seed_scores);

  std::vector<SampleOutcome> samples;
  samples.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& slot = slots[i];
    const auto& final_trial = slot.run.trials.back();
    samples.push_back({final_trial.outcome.ok(),
                       final_trial.bucket.value_or(lang::ErrorBucket::Other), slot.score});
    const auto& ex = examples[i / n_seed];
    for (const auto& trial : slot.run.trials) {
      ojson line{{"example_id", ex.id}, {"seed", seeds[i % n_seed]}};
      line["score"] = score_program(trial.outcome, ex.ground_truth, ex.kind, ex.options);
      const json trial_json = trial_to_json(trial);
      for (const auto& [k, v] : trial_json.items()) line[k] = v;
      out.transcript.push_back(line.dump());
    }
  }
  report.histogram = error_analysis(samples);
  return out;
}

std::vector<SweepCell> run_sweep(const EvalConfig& base, const SweepGrid& grid,
                                 const EvalEnvironment& env) {
  const auto or_base = [](const auto& values, auto fallback) {
    using T = std::decay_t<decltype(fallback)>;
    return values.empty() ? std::vector<T>{fallback} : std::vector<T>(values.begin(), values.end());
  };
  const auto temps = or_base(grid.temperatures, base.generation.temperature);
  const auto thresholds = or_base(grid.detection_thresholds, base.tools.detection_threshold);
  const auto apis = or_base(grid.apis, base.api);
  const auto aces = or_base(grid.aces, base.use_aces && base.ace_store.has_value());
  if (std::find(aces.begin(), aces.end(), true) != aces.end() && !base.ace_store) {
    throw std::invalid_argument("sweep over ACEs needs ace.store");
  }

  std::vector<SweepCell> cells;
  for (double temp : temps) {
    for (double thr : thresholds) {
      for (ApiVariant api : apis) {
        for (bool use : aces) {
          EvalConfig cfg = base;
          cfg.generation.temperature = temp;
          cfg.tools.detection_threshold = thr;
          cfg.api = api;
          cfg.use_aces = use;
          cells.push_back({temp, thr, api, use, run_eval(cfg, env)});
        }
      }
    }
  }
  return cells;
}

std::string sweep_summary_csv(std::span<const SweepCell> cells) {
  std::string out = "cell,temperature,detection_threshold,api,aces,mean,std\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    out += std::to_string(i) + "," + lang::format_float(c.temperature) + "," +
           lang::format_float(c.detection_threshold) + "," + to_string(c.api) + "," +
           (c.aces ? "true" : "false") + "," + lang::format_float(c.output.report.summary.mean) +
           "," + lang::format_float(c.output.report.summary.std) + "\n";
  }
  return out;
}

Histogram analyze_transcript(std::string_view jsonl) {
  struct Last {
    int trial = 0;
    SampleOutcome outcome;
  };
  std::map<std::pair<std::string, std::int64_t>, Last> finals;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      const auto key = std::make_pair(j.at("example_id").get<std::string>(),
                                      j.at("seed").get<std::int64_t>());
      const int trial = j.at("trial_index").get<int>();
      Last& last = finals[key];
      if (trial < last.trial) continue;
      last.trial = trial;
      last.outcome.ok = j.at("ok").get<bool>();
      last.outcome.score = j.value("score", 0.0);
      if (!last.outcome.ok) {
        const auto bucket = lang::bucket_from_string(j.at("bucket").get<std::string>());
        if (!bucket) throw std::invalid_argument("unknown bucket");
        last.outcome.bucket = *bucket;
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("transcript line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  std::vector<SampleOutcome> samples;
  for (const auto& [_, last] : finals) samples.push_back(last.outcome);
  return error_analysis(samples);
}

}  // namespace vpe
