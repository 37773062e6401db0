// tesalocs: run benchmark experiments comparing random and TT-guided starts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tesalocs/benchmarks.hpp"
#include "tesalocs/harness.hpp"

namespace {

using nlohmann::json;
using namespace tesalocs;

struct RunOptions {
  std::vector<std::string> functions{"all"};
  std::size_t dim = 100;
  std::size_t budget = 10000;
  std::size_t repeats = 10;
  std::vector<std::string> local{"bfgs"};
  std::string init = "both";
  std::size_t rank = 5;
  std::size_t grid_nodes = 1024;
  std::size_t batch = 100;
  std::size_t elite = 10;
  double lr = LearnerConfig{}.learning_rate;
  std::uint64_t seed0 = 0;
  std::string out_dir = "results";
  std::vector<std::string> format{"csv", "json", "table"};
  std::size_t jobs = 1;
  std::string gradient = "automatic";
  std::size_t outer_iterations = 10;
  std::size_t candidate_cap = 0;
  bool traces = true;
  std::string config;
};

// Copies a config-file key into `target` unless the flag was given.
template <typename T>
void apply_key(const json& cfg, const char* key, CLI::Option* flag, T& target) {
  if (!cfg.contains(key) || flag->count() > 0) return;
  const json& v = cfg.at(key);
  if constexpr (std::is_same_v<T, std::vector<std::string>>) {
    target = v.is_array() ? v.get<T>() : T{v.get<std::string>()};
  } else {
    target = v.get<T>();
  }
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const std::size_t comma = item.find(',', start);
      const std::string part = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) out.push_back(part);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

ExperimentSpec build_spec(const RunOptions& o) {
  ExperimentSpec spec;
  for (const auto& name : split_list(o.functions)) {
    if (name == "all") {
      for (const auto& fn : all_functions()) spec.functions.push_back(fn.name);
    } else {
      spec.functions.push_back(find_function(name).name);
    }
  }
  spec.dim = o.dim;
  spec.repeats = o.repeats;
  spec.methods.clear();
  for (const auto& m : split_list(o.local)) spec.methods.push_back(parse_local_method(m));
  if (o.init == "both") {
    spec.initializers = {Initializer::random, Initializer::tesalocs};
  } else {
    spec.initializers = {parse_initializer(o.init)};
  }
  spec.config.budget = o.budget;
  spec.config.rank = o.rank;
  spec.config.grid_nodes = o.grid_nodes;
  spec.config.batch = o.batch;
  spec.config.elite = o.elite;
  spec.config.learner.learning_rate = o.lr;
  spec.config.expected_outer_iterations = o.outer_iterations;
  if (o.candidate_cap > 0) spec.config.local.max_evals_per_candidate = o.candidate_cap;
  if (o.gradient == "numerical") {
    spec.config.local.gradient = GradientSource::numerical;
  } else if (o.gradient != "automatic") {
    throw std::invalid_argument("unknown gradient source '" + o.gradient + "'");
  }
  spec.seed0 = o.seed0;
  spec.jobs = o.jobs;
  if (o.traces) spec.trace_dir = std::filesystem::path(o.out_dir) / "traces";
  return spec;
}

int run_command(RunOptions o, const std::vector<std::pair<const char*, CLI::Option*>>& flags) {
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw std::runtime_error("cannot read config " + o.config);
    const json cfg = json::parse(in);
    for (const auto& [key, flag] : flags) {
      const std::string k = key;
      if (k == "functions") apply_key(cfg, key, flag, o.functions);
      else if (k == "dim") apply_key(cfg, key, flag, o.dim);
      else if (k == "budget") apply_key(cfg, key, flag, o.budget);
      else if (k == "repeats") apply_key(cfg, key, flag, o.repeats);
      else if (k == "local") apply_key(cfg, key, flag, o.local);
      else if (k == "init") apply_key(cfg, key, flag, o.init);
      else if (k == "rank") apply_key(cfg, key, flag, o.rank);
      else if (k == "grid_nodes") apply_key(cfg, key, flag, o.grid_nodes);
      else if (k == "batch") apply_key(cfg, key, flag, o.batch);
      else if (k == "elite") apply_key(cfg, key, flag, o.elite);
      else if (k == "lr") apply_key(cfg, key, flag, o.lr);
      else if (k == "seed0") apply_key(cfg, key, flag, o.seed0);
      else if (k == "out_dir") apply_key(cfg, key, flag, o.out_dir);
      else if (k == "format") apply_key(cfg, key, flag, o.format);
      else if (k == "jobs") apply_key(cfg, key, flag, o.jobs);
      else if (k == "gradient") apply_key(cfg, key, flag, o.gradient);
      else if (k == "outer_iterations") apply_key(cfg, key, flag, o.outer_iterations);
      else if (k == "candidate_cap") apply_key(cfg, key, flag, o.candidate_cap);
    }
  }

  const ExperimentSpec spec = build_spec(o);
  const ExperimentReport report = run_experiment(spec);
  for (const auto& f : split_list(o.format)) {
    const auto path = emit_report(report, parse_report_format(f), o.out_dir);
    std::cerr << "wrote " << path.string() << '\n';
  }
  write_report_table(std::cout, report);
  for (const auto& cell : report.cells) {
    for (const auto& failure : cell.failures) {
      std::cerr << cell.function << '/' << to_string(cell.method) << '/' << to_string(cell.initializer)
                << " seed " << failure.seed << ": " << failure.message << '\n';
    }
  }
  return report.failed_runs() == 0 ? 0 : 1;
}

int list_command() {
  for (const auto& fn : all_functions()) {
    const auto box = fn.box(10);
    std::printf("%-14s [%g, %g]  %s\n", fn.name.c_str(), box.lower, box.upper, fn.formula.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TT-guided multistart local search on analytic benchmarks"};
  app.require_subcommand(1);

  RunOptions o;
  auto* run = app.add_subcommand("run", "run an experiment and write reports");
  std::vector<std::pair<const char*, CLI::Option*>> flags{
      {"functions", run->add_option("--functions", o.functions, "function names or 'all'")},
      {"dim", run->add_option("--dim", o.dim, "dimension")},
      {"budget", run->add_option("--budget", o.budget, "objective queries per run")},
      {"repeats", run->add_option("--repeats", o.repeats, "runs per cell")},
      {"local", run->add_option("--local", o.local, "local methods: bfgs,cg,pso,spsa,none")},
      {"init", run->add_option("--init", o.init, "random, tesalocs or both")
                   ->check(CLI::IsMember({"random", "tesalocs", "both"}))},
      {"rank", run->add_option("--rank", o.rank, "TT rank")},
      {"grid_nodes", run->add_option("--grid-nodes", o.grid_nodes, "grid nodes per dimension")},
      {"batch", run->add_option("--batch", o.batch, "candidates per iteration")},
      {"elite", run->add_option("--elite", o.elite, "elites per iteration")},
      {"lr", run->add_option("--lr", o.lr, "learning rate of the TT model")},
      {"seed0", run->add_option("--seed0", o.seed0, "first seed")},
      {"out_dir", run->add_option("--out-dir", o.out_dir, "output directory")},
      {"format", run->add_option("--format", o.format, "report formats: csv,json,table")},
      {"jobs", run->add_option("--jobs", o.jobs, "worker threads")},
      {"gradient", run->add_option("--gradient", o.gradient, "automatic or numerical")},
      {"outer_iterations",
       run->add_option("--outer-iterations", o.outer_iterations,
                       "outer iterations the default per-candidate cap plans for")},
      {"candidate_cap", run->add_option("--candidate-cap", o.candidate_cap,
                                        "queries per local run; 0 picks the default")},
  };
  run->add_flag("!--no-traces", o.traces, "skip per-run trace CSVs");
  run->add_option("--config", o.config, "JSON file with the same keys; flags win");

  auto* list = app.add_subcommand("list-functions", "print the benchmark catalog");

  CLI11_PARSE(app, argc, argv);
  try {
    if (list->parsed()) return list_command();
    return run_command(o, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
