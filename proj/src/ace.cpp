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

#include "vpe/ace.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "vpe/parallel.hpp"

namespace vpe {

using ojson = nlohmann::ordered_json;

double default_correctness_threshold(TaskKind kind) {
  return kind == TaskKind::Grounding ? 0.7 : 1.0;
}

std::vector<llm::Ice> AceStore::ices(std::optional<std::size_t> n) const {
  const std::size_t count = std::min(n.value_or(entries.size()), entries.size());
  std::vector<llm::Ice> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back({entries[i].query, entries[i].code});
  return out;
}

std::string AceStore::to_json() const {
  ojson j;
  j["metadata"] = {{"api_id", metadata.api_id},
                   {"generator_id", metadata.generator_id},
                   {"k", metadata.k},
                   {"correctness_threshold", metadata.correctness_threshold}};
  if (empty_warning) j["metadata"]["warning"] = "no example passed the correctness threshold";
  ojson entries_json = ojson::array();
  for (const auto& e : entries) {
    ojson prov{{"seed", e.provenance.seed}, {"trial", e.provenance.trial}};
    if (e.provenance.timestamp) prov["timestamp"] = *e.provenance.timestamp;
    entries_json.push_back({{"query", e.query},
                            {"code", e.code},
                            {"score", e.score},
                            {"task_kind", to_string(e.kind)},
                            {"provenance", std::move(prov)}});
  }
  j["entries"] = std::move(entries_json);
  return j.dump(2) + "\n";
}

AceStore AceStore::from_json(std::string_view text) {
  AceStore store;
  try {
    const auto j = ojson::parse(text);
    const auto& m = j.at("metadata");
    store.metadata.api_id = m.at("api_id").get<std::string>();
    store.metadata.generator_id = m.at("generator_id").get<std::string>();
    store.metadata.k = m.at("k").get<int>();
    store.metadata.correctness_threshold = m.at("correctness_threshold").get<double>();
    store.empty_warning = m.contains("warning");
    for (const auto& e : j.at("entries")) {
      AceEntry entry;
      entry.query = e.at("query").get<std::string>();
      entry.code = e.at("code").get<std::string>();
      entry.score = e.at("score").get<double>();
      const auto kind = task_kind_from_string(e.at("task_kind").get<std::string>());
      if (!kind) throw std::invalid_argument("unknown task_kind in ACE entry");
      entry.kind = *kind;
      const auto& p = e.at("provenance");
      entry.provenance.seed = p.at("seed").get<std::int64_t>();
      entry.provenance.trial = p.at("trial").get<int>();
      if (p.contains("timestamp")) entry.provenance.timestamp = p["timestamp"].get<std::string>();
      store.entries.push_back(std::move(entry));
    }
  } catch (const ojson::exception& e) {
    throw std::invalid_argument(std::string("malformed ACE store: ") + e.what());
  }
  return store;
}

void AceStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write ACE store " + path.string());
  out << to_json();
  if (!out) throw std::runtime_error("cannot write ACE store " + path.string());
}

AceStore AceStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read ACE store " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

BootstrapResult bootstrap_aces(std::span<const LabeledExample> examples, const MediaLibrary& media,
                               const RunSetup& setup, const BootstrapOptions& options) {
  if (options.k < 1) throw std::invalid_argument("k must be at least 1");
  if (examples.empty()) throw std::invalid_argument("bootstrap needs at least one example");
  if (!options.policy.valid()) throw std::invalid_argument("invalid retry policy");
  const double threshold =
      options.correctness_threshold.value_or(default_correctness_threshold(examples[0].kind));

  BootstrapResult result;
  result.records.resize(examples.size());
  parallel_for(examples.size(), options.workers, [&](std::size_t i) {
    const auto& ex = examples[i];
    BootstrapRecord& rec = result.records[i];
    rec.example_id = ex.id;
    rec.run = run_with_retries(ex.query, media.input_for(ex), ex.kind, {}, options.policy, setup);
    rec.score = score_program(rec.run.final_outcome, ex.ground_truth, ex.kind, ex.options);
  });

  std::vector<std::size_t> passing;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (result.records[i].score >= threshold) passing.push_back(i);
  }
  std::stable_sort(passing.begin(), passing.end(), [&](std::size_t a, std::size_t b) {
    return result.records[a].score > result.records[b].score;
  });
  if (passing.size() > static_cast<std::size_t>(options.k)) passing.resize(options.k);

  AceStore& store = result.store;
  store.metadata = {std::string(to_string(setup.api)), setup.generator->id(), options.k, threshold};
  for (std::size_t i : passing) {
    auto& rec = result.records[i];
    rec.selected = true;
    const TrialRecord& last = rec.run.trials.back();
    store.entries.push_back(AceEntry{examples[i].query, last.code, rec.score, examples[i].kind,
                                     {last.seed_used, last.trial_index, options.timestamp}});
  }
  store.empty_warning = store.entries.empty();
  return result;
}

std::vector<LabeledExample> sample_fewshot_manual(std::span<const LabeledExample> dataset,
                                                  std::span<const std::string> ids) {
  std::vector<LabeledExample> out;
  std::set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw std::invalid_argument("duplicate example id '" + id + "'");
    auto it = std::find_if(dataset.begin(), dataset.end(),
                           [&](const LabeledExample& e) { return e.id == id; });
    if (it == dataset.end()) throw std::invalid_argument("unknown example id '" + id + "'");
    out.push_back(*it);
  }
  return out;
}

namespace {

// Unbiased draw from [0, bound). std::uniform_int_distribution is avoided
// because its output differs between standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t reject_below = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= reject_below) return r % bound;
  }
}

}  // namespace

std::vector<LabeledExample> sample_fewshot_random(std::span<const LabeledExample> dataset,
                                                  std::size_t n, std::uint64_t seed) {
  if (n > dataset.size()) {
    throw std::invalid_argument("cannot sample " + std::to_string(n) + " of " +
                                std::to_string(dataset.size()) + " examples");
  }
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::vector<LabeledExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + bounded(rng, order.size() - i);
    std::swap(order[i], order[j]);
    out.push_back(dataset[order[i]]);
  }
  return out;
}

}  // namespace vpe
