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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vpe/dataset.hpp"
#include "vpe/llm.hpp"
#include "vpe/self_correct.hpp"

namespace vpe {

struct AceProvenance {
  std::int64_t seed = 0;
  int trial = 1;
  std::optional<std::string> timestamp;
  friend bool operator==(const AceProvenance&, const AceProvenance&) = default;
};

/// Automatically generated in-context example. Holds no ground truth.
struct AceEntry {
  std::string query;
  std::string code;
  double score = 0;
  TaskKind kind = TaskKind::Grounding;
  AceProvenance provenance;
  friend bool operator==(const AceEntry&, const AceEntry&) = default;
};

struct AceMetadata {
  std::string api_id;
  std::string generator_id;
  int k = 0;
  double correctness_threshold = 0;
  friend bool operator==(const AceMetadata&, const AceMetadata&) = default;
};

/// Entries sorted by descending score, ties in example order.
struct AceStore {
  AceMetadata metadata;
  std::vector<AceEntry> entries;
  // Set when no example passed; the engine then runs zero-shot.
  bool empty_warning = false;

  /// The first `n` entries (all when n exceeds the size) as prompt ICEs.
  std::vector<llm::Ice> ices(std::optional<std::size_t> n = std::nullopt) const;

  std::string to_json() const;
  static AceStore from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static AceStore load(const std::filesystem::path& path);

  friend bool operator==(const AceStore&, const AceStore&) = default;
};

/// 0.7 IoU for grounding, exact (1.0) otherwise.
double default_correctness_threshold(TaskKind kind);

/// One zero-shot bootstrap attempt, kept for auditing the selection.
struct BootstrapRecord {
  std::string example_id;
  double score = 0;
  bool selected = false;
  RunResult run;
};

struct BootstrapResult {
  AceStore store;
  std::vector<BootstrapRecord> records;  // one per example, input order
};

struct BootstrapOptions {
  int k = 16;
  std::optional<double> correctness_threshold;  // per-kind default when unset
  RetryPolicy policy{.max_trials = 1};
  int workers = 1;
  std::optional<std::string> timestamp;
};

/// Runs every example zero-shot, keeps programs scoring at least the
/// correctness threshold, and returns the best `k` by score.
BootstrapResult bootstrap_aces(std::span<const LabeledExample> examples, const MediaLibrary& media,
                               const RunSetup& setup, const BootstrapOptions& options);

/// `ids` in the given order.
std::vector<LabeledExample> sample_fewshot_manual(std::span<const LabeledExample> dataset,
                                                  std::span<const std::string> ids);
/// `n` examples drawn uniformly without replacement, in draw order.
std::vector<LabeledExample> sample_fewshot_random(std::span<const LabeledExample> dataset,
                                                  std::size_t n, std::uint64_t seed);

}  // namespace vpe
