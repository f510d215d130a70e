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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vpe/ace.hpp"
#include "vpe/dataset.hpp"
#include "vpe/self_correct.hpp"

namespace vpe {

/// Engine version embedded in reports.
std::string_view engine_version();

struct Aggregate {
  double mean = 0;
  double std = 0;  // sample standard deviation, 0 for a single value
};

/// Order-insensitive: values are summed in sorted order.
Aggregate aggregate(std::span<const double> values);

/// Error-analysis bins: failure buckets, then score ranges for samples that
/// executed.
enum class Bin { ObjDet, RetType, Other, Zero, UpTo03, UpTo05, UpTo07, UpTo1 };
inline constexpr std::size_t kNumBins = 8;

const char* bin_label(Bin b);
/// Bin for an executed sample's score in [0, 1].
Bin score_bin(double score);

/// Final outcome of one (example, seed) sample.
struct SampleOutcome {
  bool ok = false;
  lang::ErrorBucket bucket = lang::ErrorBucket::Other;  // when !ok
  double score = 0;
};

struct Histogram {
  std::array<std::size_t, kNumBins> counts{};
  std::size_t total = 0;

  double fraction(Bin b) const;
  nlohmann::ordered_json to_json() const;
  /// `bin,count,fraction` rows, one per bin, zero rows included.
  std::string to_csv() const;
};

Histogram error_analysis(std::span<const SampleOutcome> samples);

struct EvalConfig {
  std::filesystem::path dataset;
  std::optional<TaskKind> kind;
  ApiVariant api = ApiVariant::Abstract;
  std::optional<std::filesystem::path> ace_store;
  bool use_aces = true;
  std::optional<std::size_t> ace_count;  // leading entries to use; all when unset
  RetryPolicy policy;
  llm::GenerationConfig generation;  // seed is replaced by each evaluation seed
  ToolConfig tools;
  lang::ExecutionLimits limits;
  std::vector<std::int64_t> seeds{0, 1, 2};
  int workers = 1;  // not part of the report: results do not depend on it

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  /// Every field that can influence results.
  nlohmann::ordered_json echo() const;
};

struct SeedScore {
  std::int64_t seed = 0;
  double score = 0;
};

struct Report {
  std::string engine_version;
  nlohmann::ordered_json config;
  std::size_t num_examples = 0;
  std::vector<SeedScore> per_seed;  // ascending seed
  Aggregate summary;
  Histogram histogram;

  /// Stable, pretty-printed JSON.
  std::string to_json() const;
};

/// What the run needs besides the config.
struct EvalEnvironment {
  const llm::Generator* generator = nullptr;
  // Null selects the fixture backend over the dataset's fixtures.
  const ToolBackend* backend = nullptr;
  llm::TemplateSet templates;
};

struct EvalOutput {
  Report report;
  // One JSON line per trial, ordered by example, seed, trial.
  std::vector<std::string> transcript;
};

/// Runs every (example, seed) pair. Failures are recorded as data; only
/// setup problems (bad config, unreadable files) throw.
EvalOutput run_eval(const EvalConfig& config, const EvalEnvironment& env);

/// Values to cross; an empty list keeps the base config's value.
struct SweepGrid {
  std::vector<double> temperatures;
  std::vector<double> detection_thresholds;
  std::vector<ApiVariant> apis;
  std::vector<bool> aces;
};

struct SweepCell {
  double temperature = 0;
  double detection_threshold = 0;
  ApiVariant api = ApiVariant::Abstract;
  bool aces = false;
  EvalOutput output;
};

/// Cross product in the order temperature x threshold x api x aces.
std::vector<SweepCell> run_sweep(const EvalConfig& base, const SweepGrid& grid,
                                 const EvalEnvironment& env);

/// One row per cell with mean and std.
std::string sweep_summary_csv(std::span<const SweepCell> cells);

/// Histogram over the final trial of each (example_id, seed) in transcript
/// JSONL.
Histogram analyze_transcript(std::string_view jsonl);

}  // namespace vpe
