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

// vpe: command-line front end for the visual-program engine.
//
// Exit codes: 0 when the command ran (zero scores and failed programs
// included), 2 for configuration or I/O errors, 3 when a remote backend is
// unreachable.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vpe/ace.hpp"
#include "vpe/eval.hpp"
#include "vpe/llm.hpp"
#include "vpe/self_correct.hpp"
#include "vpe/wire.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitUnreachable = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Unreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string env_name(const std::string& flag) {
  std::string name = "VPE_";
  for (char c : flag) name += (c == '.' || c == '-') ? '_' : static_cast<char>(std::toupper(c));
  return name;
}

// TOML sections become dotted option names: `[tools] strict_find = false`
// sets `--tools.strict_find`. Keys whose environment variable is set are
// dropped so the variable wins over the file.
class SectionedConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> out;
    for (auto& item : CLI::ConfigTOML::from_config(input)) {
      if (item.name == "++" || item.name == "--") continue;
      std::string prefix;
      for (const auto& p : item.parents) prefix += p + ".";
      item.name = prefix + item.name;
      item.parents.clear();
      if (std::getenv(env_name(item.name).c_str()) != nullptr) continue;
      out.push_back(std::move(item));
    }
    return out;
  }
};

struct Options {
  // dataset
  std::string dataset_path;
  std::string dataset_kind;
  // api
  std::string api = "abstract";
  // ace
  std::string ace_store;
  std::optional<std::size_t> ace_count;
  int ace_k = 16;
  std::size_t ace_n = 16;
  std::string ace_mode = "random";
  std::vector<std::string> ace_ids;
  std::uint64_t ace_seed = 0;
  std::optional<double> ace_threshold;
  bool ace_retry = true;
  // policy
  int max_trials = 5;
  std::string strategy = "regenerate";
  bool tune_detection = false;
  std::vector<double> schedule{0.15, 0.10, 0.05};
  // generation
  std::string gen_backend = "mock";
  std::string mock_script;
  std::string gen_url = "http://127.0.0.1:8091";
  std::string gen_model = "code-model";
  std::string gen_token_env = "VPE_GENERATOR_TOKEN";
  double temperature = 0.4;
  std::int64_t gen_seed = 0;
  int max_tokens = 512;
  int gen_timeout_ms = 60'000;
  std::string template_dir;
  // tools
  std::string tools_backend = "fixture";
  double detection_threshold = 0.1;
  double text_match_threshold = 0.5;
  bool strict_find = true;
  std::string tools_host = "127.0.0.1";
  int tools_port = 8090;
  int tools_max_in_flight = 4;
  int tools_timeout_ms = 10'000;
  // limits
  std::int64_t max_steps = 100'000;
  std::int64_t max_loop_iterations = 10'000;
  std::int64_t max_collection_length = 10'000;
  std::int64_t wall_clock_ms = 30'000;
  // eval
  std::vector<std::int64_t> seeds{0, 1, 2};
  int workers = 1;
  // sweep
  std::vector<double> sweep_temperatures;
  std::vector<double> sweep_thresholds;
  std::vector<std::string> sweep_apis;
  std::vector<bool> sweep_aces;

  // run
  std::string run_scene;
  std::string run_query;
  std::string run_kind;
  std::vector<std::string> run_options;
  std::string run_transcript;
  // bootstrap / eval / sweep / analyze
  std::string out;
  std::vector<std::string> transcripts;
  // serve-fixtures
  std::string fixtures_dir;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8090;
  std::string port_file;
};

// Adds `--<key>` with a matching VPE_<KEY> environment variable.
template <typename T>
CLI::Option* add(CLI::App& app, const std::string& key, T& target, const std::string& help) {
  return app.add_option("--" + key, target, help)->envname(env_name(key))->capture_default_str();
}

// List options also accept comma-separated values, which is the form used by
// environment variables.
template <typename T>
CLI::Option* add(CLI::App& app, const std::string& key, std::vector<T>& target,
                 const std::string& help) {
  return app.add_option("--" + key, target, help)
      ->envname(env_name(key))
      ->delimiter(',')
      ->capture_default_str();
}

CLI::Option* add_flag(CLI::App& app, const std::string& key, bool& target,
                      const std::string& help) {
  return app.add_option("--" + key, target, help + " (true/false)")
      ->envname(env_name(key))
      ->capture_default_str();
}

void define_shared(CLI::App& app, Options& o) {
  const auto kinds = CLI::IsMember({"grounding", "vqa", "video_mcq"});
  const auto apis = CLI::IsMember({"abstract", "vipergpt_style"});

  add(app, "dataset.path", o.dataset_path, "Dataset JSONL; scene paths resolve against its directory");
  add(app, "dataset.kind", o.dataset_kind, "Require every example to have this task kind")
      ->check(kinds);
  add(app, "api.variant", o.api, "API exposed to programs and shown in prompts")->check(apis);

  add(app, "ace.store", o.ace_store, "ACE store used as in-context examples");
  add(app, "ace.count", o.ace_count, "Use only the first N entries of the ACE store");
  add(app, "ace.k", o.ace_k, "Maximum entries kept by bootstrap")->check(CLI::PositiveNumber);
  add(app, "ace.n", o.ace_n, "Few-shot examples sampled for bootstrap (random mode)");
  add(app, "ace.mode", o.ace_mode, "Few-shot selection: random or manual")
      ->check(CLI::IsMember({"random", "manual"}));
  add(app, "ace.ids", o.ace_ids, "Example ids for manual mode, in order");
  add(app, "ace.seed", o.ace_seed, "Seed for random few-shot sampling");
  add(app, "ace.threshold", o.ace_threshold,
      "Minimum score for an ACE (default 0.7 grounding, 1.0 otherwise)");
  add_flag(app, "ace.retry", o.ace_retry, "Bootstrap with the retry policy instead of one trial");

  add(app, "policy.max_trials", o.max_trials, "Trials per sample")->check(CLI::PositiveNumber);
  add(app, "policy.strategy", o.strategy, "regenerate or self_debug")
      ->check(CLI::IsMember({"regenerate", "self_debug"}));
  add_flag(app, "policy.tune_detection", o.tune_detection,
           "Lower the detection threshold after detector failures");
  add(app, "policy.threshold_schedule", o.schedule,
      "Strictly decreasing detection thresholds used by tuning");

  add(app, "generation.backend", o.gen_backend, "mock or http")
      ->check(CLI::IsMember({"mock", "http"}));
  add(app, "generation.mock_script", o.mock_script, "JSON script for the mock generator");
  add(app, "generation.url", o.gen_url, "Base URL of the HTTP generator");
  add(app, "generation.model", o.gen_model, "Model name sent to the HTTP generator");
  add(app, "generation.token_env", o.gen_token_env,
      "Environment variable holding the generator bearer token");
  add(app, "generation.temperature", o.temperature, "Sampling temperature")
      ->check(CLI::NonNegativeNumber);
  add(app, "generation.seed", o.gen_seed, "Base seed for single runs and bootstrap");
  add(app, "generation.max_tokens", o.max_tokens, "Maximum output tokens")
      ->check(CLI::PositiveNumber);
  add(app, "generation.timeout_ms", o.gen_timeout_ms, "HTTP generator timeout")
      ->check(CLI::PositiveNumber);
  add(app, "generation.template_dir", o.template_dir,
      "Directory overriding prompt_default.txt / prompt_debug.txt");

  add(app, "tools.backend", o.tools_backend, "fixture or remote")
      ->check(CLI::IsMember({"fixture", "remote"}));
  add(app, "tools.detection_threshold", o.detection_threshold, "Detector confidence cutoff")
      ->check(CLI::Range(0.0, 1.0));
  add(app, "tools.text_match_threshold", o.text_match_threshold,
      "Token-overlap fraction needed to match an event")
      ->check(CLI::Range(0.0, 1.0));
  add_flag(app, "tools.strict_find", o.strict_find, "Empty find raises a retryable error");
  add(app, "tools.host", o.tools_host, "Remote tool server host");
  add(app, "tools.port", o.tools_port, "Remote tool server port")->check(CLI::Range(1, 65535));
  add(app, "tools.max_in_flight", o.tools_max_in_flight, "Concurrent remote tool requests")
      ->check(CLI::PositiveNumber);
  add(app, "tools.timeout_ms", o.tools_timeout_ms, "Remote tool request timeout")
      ->check(CLI::PositiveNumber);

  add(app, "limits.max_steps", o.max_steps, "Interpreter step budget")->check(CLI::PositiveNumber);
  add(app, "limits.max_loop_iterations", o.max_loop_iterations, "Iterations per loop")
      ->check(CLI::PositiveNumber);
  add(app, "limits.max_collection_length", o.max_collection_length,
      "Longest list or text a program may build")
      ->check(CLI::PositiveNumber);
  add(app, "limits.wall_clock_ms", o.wall_clock_ms, "Wall-clock budget per program")
      ->check(CLI::PositiveNumber);

  add(app, "eval.seeds", o.seeds, "Evaluation seeds");
  add(app, "eval.workers", o.workers, "Parallel samples; results do not depend on it")
      ->check(CLI::PositiveNumber);

  add(app, "sweep.temperatures", o.sweep_temperatures, "Temperatures to sweep");
  add(app, "sweep.thresholds", o.sweep_thresholds, "Detection thresholds to sweep");
  add(app, "sweep.apis", o.sweep_apis, "API variants to sweep")->check(apis);
  add(app, "sweep.aces", o.sweep_aces, "ACE settings to sweep (true/false)");
}

// ---------------------------------------------------------------------------

vpe::TaskKind parse_kind(const std::string& s) {
  auto k = vpe::task_kind_from_string(s);
  if (!k) throw ConfigError("unknown task kind '" + s + "'");
  return *k;
}

vpe::RetryPolicy make_policy(const Options& o) {
  vpe::RetryPolicy p;
  p.max_trials = o.max_trials;
  p.strategy = *vpe::retry_strategy_from_string(o.strategy);
  p.tune_detection = o.tune_detection;
  p.threshold_schedule = o.schedule;
  if (!p.valid()) {
    throw ConfigError("policy.threshold_schedule must be nonempty, strictly decreasing, in [0, 1]");
  }
  return p;
}

vpe::ToolConfig make_tool_config(const Options& o) {
  return {o.detection_threshold, o.text_match_threshold, o.strict_find};
}

vpe::lang::ExecutionLimits make_limits(const Options& o) {
  return {o.max_steps, o.max_loop_iterations, o.max_collection_length,
          std::chrono::milliseconds(o.wall_clock_ms)};
}

vpe::llm::GenerationConfig make_generation(const Options& o) {
  return {o.temperature, o.gen_seed, o.max_tokens};
}

std::unique_ptr<vpe::llm::Generator> make_generator(const Options& o) {
  if (o.gen_backend == "mock") {
    if (o.mock_script.empty()) {
      throw ConfigError("generation.mock_script is required with the mock generator");
    }
    if (!fs::exists(o.mock_script)) throw ConfigError("mock script not found: " + o.mock_script);
    return std::make_unique<vpe::llm::MockGenerator>(vpe::llm::MockGenerator::load(o.mock_script));
  }
  vpe::llm::HttpGeneratorOptions h;
  h.url = o.gen_url;
  h.model = o.gen_model;
  h.token_env = o.gen_token_env;
  h.timeout = std::chrono::milliseconds(o.gen_timeout_ms);
  return std::make_unique<vpe::llm::HttpGenerator>(h);
}

vpe::llm::TemplateSet make_templates(const Options& o) {
  if (o.template_dir.empty()) return {};
  if (!fs::is_directory(o.template_dir)) {
    throw ConfigError("template directory not found: " + o.template_dir);
  }
  return vpe::llm::TemplateSet::from_directory(o.template_dir);
}

// Null for the fixture backend.
std::unique_ptr<vpe::wire::RemoteBackend> make_remote(const Options& o) {
  if (o.tools_backend != "remote") return nullptr;
  vpe::wire::RemoteOptions r;
  r.host = o.tools_host;
  r.port = o.tools_port;
  r.max_in_flight = o.tools_max_in_flight;
  r.timeout = std::chrono::milliseconds(o.tools_timeout_ms);
  auto remote = std::make_unique<vpe::wire::RemoteBackend>(r);
  if (!remote->ping()) {
    throw Unreachable("tool server unreachable at " + o.tools_host + ":" +
                      std::to_string(o.tools_port));
  }
  return remote;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw ConfigError("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

vpe::EvalConfig make_eval_config(const Options& o) {
  vpe::EvalConfig c;
  if (o.dataset_path.empty()) throw ConfigError("dataset.path is required");
  c.dataset = o.dataset_path;
  if (!o.dataset_kind.empty()) c.kind = parse_kind(o.dataset_kind);
  c.api = *vpe::api_variant_from_string(o.api);
  if (!o.ace_store.empty()) c.ace_store = o.ace_store;
  c.ace_count = o.ace_count;
  c.policy = make_policy(o);
  c.generation = make_generation(o);
  c.tools = make_tool_config(o);
  c.limits = make_limits(o);
  c.seeds = o.seeds;
  c.workers = o.workers;
  return c;
}

std::string describe_value(const vpe::lang::Value& v, vpe::TaskKind kind,
                           const std::vector<std::string>& options) {
  if (const auto* p = v.get_if<vpe::ImagePatch>()) {
    return "box " + vpe::to_string(p->box) + " in " + p->scene_id;
  }
  if (kind == vpe::TaskKind::VideoMcq && v.is<std::int64_t>()) {
    const auto i = v.as<std::int64_t>();
    return "option " + std::to_string(i) + ": " + options.at(static_cast<std::size_t>(i));
  }
  return vpe::lang::to_display(v);
}

// ---------------------------------------------------------------------------

int cmd_run(const Options& o) {
  if (!fs::exists(o.run_scene)) throw ConfigError("scene file not found: " + o.run_scene);
  const vpe::TaskKind kind = parse_kind(
      !o.run_kind.empty() ? o.run_kind : (!o.dataset_kind.empty() ? o.dataset_kind : "grounding"));

  vpe::MediaLibrary media;
  if (vpe::is_video_fixture_file(o.run_scene)) {
    media.add_video(o.run_scene, vpe::load_video_fixture(o.run_scene));
  } else {
    media.add_scene(o.run_scene, vpe::load_scene_fixture(o.run_scene));
  }
  vpe::LabeledExample ex;
  ex.id = "run";
  ex.kind = kind;
  ex.scene = o.run_scene;
  ex.query = o.run_query;
  ex.options = o.run_options;

  std::vector<vpe::llm::Ice> ices;
  if (!o.ace_store.empty()) ices = vpe::AceStore::load(o.ace_store).ices(o.ace_count);

  const auto generator = make_generator(o);
  const auto remote = make_remote(o);
  std::optional<vpe::FixtureBackend> fixture;
  const vpe::ToolBackend* backend = remote.get();
  if (!backend) backend = &fixture.emplace(media.registry());

  vpe::RunSetup setup;
  setup.backend = backend;
  setup.tools = make_tool_config(o);
  setup.api = *vpe::api_variant_from_string(o.api);
  setup.generator = generator.get();
  setup.generation = make_generation(o);
  setup.templates = make_templates(o);
  setup.limits = make_limits(o);
  setup.keep_prompts = true;

  const auto result =
      vpe::run_with_retries(ex.query, media.input_for(ex), kind, ices, make_policy(o), setup);
  const auto& last = result.trials.back();
  if (result.final_outcome.ok()) {
    std::cout << "result: " << describe_value(result.final_outcome.value(), kind, ex.options)
              << "\n";
  } else {
    std::cout << "result: failed ("
              << vpe::lang::to_string(last.bucket.value_or(vpe::lang::ErrorBucket::Other))
              << ") " << result.final_outcome.error().describe() << "\n";
  }
  std::cout << "trials: " << result.trials.size() << "\n";
  std::cout << "threshold: " << vpe::lang::format_float(last.threshold_used) << "\n";

  if (!o.run_transcript.empty()) {
    std::string lines;
    for (const auto& t : result.trials) {
      auto j = vpe::trial_to_json(t);
      j["api"] = o.api;
      lines += j.dump() + "\n";
    }
    write_file(o.run_transcript, lines);
  }
  return kExitOk;
}

int cmd_bootstrap(const Options& o) {
  if (o.dataset_path.empty()) throw ConfigError("dataset.path is required");
  std::optional<vpe::TaskKind> kind;
  if (!o.dataset_kind.empty()) kind = parse_kind(o.dataset_kind);
  const auto dataset = vpe::load_dataset(o.dataset_path, kind);
  std::vector<vpe::LabeledExample> fewshot;
  try {
    fewshot = o.ace_mode == "manual" ? vpe::sample_fewshot_manual(dataset, o.ace_ids)
                                     : vpe::sample_fewshot_random(dataset, o.ace_n, o.ace_seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (fewshot.empty()) throw ConfigError("no few-shot examples selected");
  const auto media = vpe::MediaLibrary::load(fewshot, fs::path(o.dataset_path).parent_path());

  const auto generator = make_generator(o);
  const auto remote = make_remote(o);
  std::optional<vpe::FixtureBackend> fixture;
  const vpe::ToolBackend* backend = remote.get();
  if (!backend) backend = &fixture.emplace(media.registry());

  vpe::RunSetup setup;
  setup.backend = backend;
  setup.tools = make_tool_config(o);
  setup.api = *vpe::api_variant_from_string(o.api);
  setup.generator = generator.get();
  setup.generation = make_generation(o);
  setup.templates = make_templates(o);
  setup.limits = make_limits(o);

  vpe::BootstrapOptions opts;
  opts.k = o.ace_k;
  opts.correctness_threshold = o.ace_threshold;
  opts.policy = make_policy(o);
  if (!o.ace_retry) opts.policy.max_trials = 1;
  opts.workers = o.workers;

  const auto result = vpe::bootstrap_aces(fewshot, media, setup, opts);
  result.store.save(o.out);
  std::size_t passed = 0;
  for (const auto& r : result.records) {
    passed += r.score >= result.store.metadata.correctness_threshold;
  }
  std::cout << "passed: " << passed << " of " << fewshot.size() << "\n";
  std::cout << "stored: " << result.store.entries.size() << " -> " << o.out << "\n";
  if (result.store.empty_warning) {
    std::cerr << "warning: no program reached the correctness threshold; the store is empty\n";
  }
  return kExitOk;
}

vpe::EvalEnvironment make_environment(const Options& o, const vpe::llm::Generator& generator,
                                      const vpe::ToolBackend* remote) {
  vpe::EvalEnvironment env;
  env.generator = &generator;
  env.backend = remote;
  env.templates = make_templates(o);
  return env;
}

void write_eval_output(const fs::path& dir, const vpe::EvalOutput& out) {
  write_file(dir / "report.json", out.report.to_json());
  write_file(dir / "histogram.csv", out.report.histogram.to_csv());
  std::string lines;
  for (const auto& l : out.transcript) lines += l + "\n";
  write_file(dir / "transcript.jsonl", lines);
}

int cmd_eval(const Options& o) {
  const auto config = make_eval_config(o);
  const auto generator = make_generator(o);
  const auto remote = make_remote(o);
  const auto out = vpe::run_eval(config, make_environment(o, *generator, remote.get()));
  write_eval_output(o.out, out);
  const auto& r = out.report;
  std::cout << "examples: " << r.num_examples << "\n";
  for (const auto& s : r.per_seed) {
    std::cout << "seed " << s.seed << ": " << vpe::lang::format_float(s.score) << "\n";
  }
  std::cout << "mean: " << vpe::lang::format_float(r.summary.mean)
            << " std: " << vpe::lang::format_float(r.summary.std) << "\n";
  std::cout << "report: " << (fs::path(o.out) / "report.json").string() << "\n";
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const auto config = make_eval_config(o);
  vpe::SweepGrid grid;
  grid.temperatures = o.sweep_temperatures;
  grid.detection_thresholds = o.sweep_thresholds;
  for (const auto& a : o.sweep_apis) grid.apis.push_back(*vpe::api_variant_from_string(a));
  grid.aces = o.sweep_aces;
  const auto generator = make_generator(o);
  const auto remote = make_remote(o);
  const auto cells = vpe::run_sweep(config, grid, make_environment(o, *generator, remote.get()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    write_eval_output(fs::path(o.out) / ("cell_" + std::to_string(i)), cells[i].output);
  }
  const std::string summary = vpe::sweep_summary_csv(cells);
  write_file(fs::path(o.out) / "summary.csv", summary);
  std::cout << summary;
  return kExitOk;
}

int cmd_analyze(const Options& o) {
  std::string all;
  for (const auto& path : o.transcripts) {
    if (!fs::exists(path)) throw ConfigError("transcript not found: " + path);
    all += read_file(path);
    if (!all.empty() && all.back() != '\n') all += '\n';
  }
  const auto hist = vpe::analyze_transcript(all);
  const std::string csv = hist.to_csv();
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_file(o.out, csv);
    std::cout << "samples: " << hist.total << " -> " << o.out << "\n";
  }
  return kExitOk;
}

int cmd_serve(const Options& o) {
  if (!fs::is_directory(o.fixtures_dir)) {
    throw ConfigError("fixture directory not found: " + o.fixtures_dir);
  }
  auto registry = vpe::SceneRegistry::from_directory(o.fixtures_dir);
  const std::size_t scenes = registry.scene_ids().size();
  vpe::wire::ToolServer server(std::make_shared<vpe::FixtureBackend>(std::move(registry)));
  int port = 0;
  try {
    port = server.bind(o.serve_host, o.serve_port);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  if (!o.port_file.empty()) write_file(o.port_file, std::to_string(port) + "\n");
  std::cout << "serving " << scenes << " scenes on " << o.serve_host << ":" << port << std::endl;
  server.serve();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visual-program engine: generate, run, and evaluate visual programs."};
  app.set_version_flag("--version", std::string(vpe::engine_version()));
  app.set_config("--config", "", "TOML config file; [section] key = value sets --section.key");
  app.config_formatter(std::make_shared<SectionedConfig>());
  app.allow_config_extras(false);
  app.require_subcommand(1);

  Options o;
  define_shared(app, o);

  auto* run = app.add_subcommand("run", "Answer one query on one scene or video fixture");
  run->add_option("--scene", o.run_scene, "Scene or video fixture file")->required();
  run->add_option("--query", o.run_query, "Query text")->required();
  run->add_option("--kind", o.run_kind, "grounding, vqa or video_mcq (default grounding)")
      ->check(CLI::IsMember({"grounding", "vqa", "video_mcq"}));
  run->add_option("--option", o.run_options, "Answer choice; repeat for each option");
  run->add_option("--transcript", o.run_transcript, "Write per-trial JSONL here");

  auto* boot = app.add_subcommand("bootstrap", "Build an ACE store from few-shot examples");
  boot->add_option("--out", o.out, "ACE store file to write")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a dataset over several seeds");
  eval->add_option("--out", o.out, "Directory for report.json, histogram.csv, transcript.jsonl")
      ->required();

  auto* sweep = app.add_subcommand("sweep", "Evaluate the cross product of sweep.* values");
  sweep->add_option("--out", o.out, "Directory for summary.csv and one folder per cell")
      ->required();

  auto* analyze = app.add_subcommand("analyze", "Error histogram from transcript files");
  analyze->add_option("transcripts", o.transcripts, "Transcript JSONL files")->required();
  analyze->add_option("--out", o.out, "CSV file to write (default stdout)");

  auto* serve = app.add_subcommand("serve-fixtures", "Serve the tool protocol from fixtures");
  serve->add_option("--fixtures", o.fixtures_dir, "Directory of scene/video fixture files")
      ->required();
  serve->add_option("--host", o.serve_host, "Address to bind")->capture_default_str();
  serve->add_option("--port", o.serve_port, "Port to bind; 0 picks a free one")
      ->capture_default_str();
  serve->add_option("--port-file", o.port_file, "Write the bound port to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(o);
    if (*boot) return cmd_bootstrap(o);
    if (*eval) return cmd_eval(o);
    if (*sweep) return cmd_sweep(o);
    if (*analyze) return cmd_analyze(o);
    if (*serve) return cmd_serve(o);
  } catch (const Unreachable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnreachable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
