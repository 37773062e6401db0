#include "tesalocs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "tesalocs/benchmarks.hpp"

namespace tesalocs {

namespace {

using nlohmann::json;

std::string sci(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }
double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

struct Task {
  std::size_t cell;
  std::uint64_t seed;
};

struct Outcome {
  bool ok = false;
  double error = 0.0;
  std::string message;
};

}  // namespace

std::string_view to_string(Initializer i) {
  return i == Initializer::random ? "random" : "tesalocs";
}

Initializer parse_initializer(std::string_view name) {
  if (name == "random") return Initializer::random;
  if (name == "tesalocs") return Initializer::tesalocs;
  throw std::invalid_argument("unknown initializer '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  if (repeats == 0) throw std::invalid_argument("repeats must be at least 1");
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  if (functions.empty()) throw std::invalid_argument("no functions selected");
  if (methods.empty()) throw std::invalid_argument("no local methods selected");
  if (initializers.empty()) throw std::invalid_argument("no initializers selected");
  if (jobs == 0) throw std::invalid_argument("jobs must be at least 1");
  for (const auto& name : functions) {
    const auto& fn = find_function(name);
    if (dim < fn.min_dim) {
      throw std::invalid_argument(fn.name + " needs dimension >= " + std::to_string(fn.min_dim));
    }
  }
  config.validate();
}

std::size_t ExperimentReport::failed_runs() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.failures.size();
  return n;
}

std::size_t ExperimentReport::wins(LocalMethod method, Initializer init) const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [&](const CellResult& c) {
    return c.method == method && c.initializer == init && c.win;
  }));
}

const CellResult* ExperimentReport::find(std::string_view function, LocalMethod method,
                                         Initializer init) const {
  for (const auto& c : cells) {
    if (c.function == function && c.method == method && c.initializer == init) return &c;
  }
  return nullptr;
}

std::pair<double, double> aggregate(std::vector<double> errors) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (errors.empty()) return {nan, nan};
  std::sort(errors.begin(), errors.end());
  const double n = static_cast<double>(errors.size());
  double sum = 0.0;
  for (double e : errors) sum += e;
  const double mean = sum / n;
  if (errors.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double e : errors) ss += (e - mean) * (e - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

void assign_wins(std::vector<CellResult>& cells) {
  std::map<std::pair<std::string, LocalMethod>, std::vector<CellResult*>> groups;
  for (auto& c : cells) {
    c.win = false;
    groups[{c.function, c.method}].push_back(&c);
  }
  for (auto& [key, rows] : groups) {
    if (rows.size() < 2) continue;
    bool all_converged = true;
    double best = std::numeric_limits<double>::infinity();
    for (const CellResult* r : rows) {
      if (std::isnan(r->mean_error)) {
        all_converged = false;
        continue;
      }
      all_converged = all_converged && r->mean_error < kCoConvergence;
      best = std::min(best, r->mean_error);
    }
    if (std::isinf(best)) continue;
    for (CellResult* r : rows) {
      if (std::isnan(r->mean_error)) continue;
      r->win = all_converged || r->mean_error == best;
    }
  }
}

RunTrace run_cell(const std::string& function, LocalMethod method, Initializer init,
                  std::size_t dim, const TesalocsConfig& config, std::uint64_t seed) {
  const BenchmarkFunction& fn = find_function(function);
  TesalocsConfig cfg = config;
  cfg.local.method = method;
  cfg.seed = seed;
  const Objective obj = fn.objective(dim);
  const SearchSpace space = fn.search_space(dim, cfg.grid_nodes);
  return init == Initializer::random ? run_baseline(obj, space, cfg) : run(obj, space, cfg);
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.dim = spec.dim;
  report.budget = spec.config.budget;
  report.repeats = spec.repeats;

  for (const auto& name : spec.functions) {
    for (LocalMethod m : spec.methods) {
      for (Initializer init : spec.initializers) {
        CellResult c;
        c.function = find_function(name).name;
        c.method = m;
        c.initializer = init;
        report.cells.push_back(std::move(c));
      }
    }
  }
  if (spec.trace_dir) std::filesystem::create_directories(*spec.trace_dir);

  std::vector<Task> tasks;
  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    for (std::size_t s = 0; s < spec.repeats; ++s) tasks.push_back({c, spec.seed0 + s});
  }
  std::vector<Outcome> outcomes(tasks.size());

  auto execute = [&](std::size_t t) {
    const CellResult& cell = report.cells[tasks[t].cell];
    Outcome& out = outcomes[t];
    try {
      const RunTrace trace = run_cell(cell.function, cell.method, cell.initializer, spec.dim,
                                      spec.config, tasks[t].seed);
      if (!std::isfinite(trace.best_value)) throw std::runtime_error("no finite objective value");
      const double fstar = find_function(cell.function).minimum_value(spec.dim);
      out.error = std::abs(trace.best_value - fstar);
      out.ok = true;
      if (spec.trace_dir) {
        const auto path = *spec.trace_dir / trace_file_name(cell.function, cell.method,
                                                            cell.initializer, tasks[t].seed);
        std::ofstream file(path);
        write_trace_csv(file, trace);
        if (!file) throw std::runtime_error("cannot write trace " + path.string());
      }
    } catch (const std::exception& e) {
      out.ok = false;
      out.message = e.what();
    }
  };

  const std::size_t workers = std::min(spec.jobs, tasks.size());
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) execute(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) execute(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t t = 0; t < tasks.size(); ++t) {
    CellResult& cell = report.cells[tasks[t].cell];
    if (outcomes[t].ok) {
      cell.seeds.push_back(tasks[t].seed);
      cell.errors.push_back(outcomes[t].error);
    } else {
      cell.failures.push_back({tasks[t].seed, outcomes[t].message});
    }
  }
  for (auto& cell : report.cells) {
    std::tie(cell.mean_error, cell.sigma) = aggregate(cell.errors);
  }
  assign_wins(report.cells);
  return report;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  if (name == "table" || name == "text" || name == "text-table") return ReportFormat::table;
  throw std::invalid_argument("unknown report format '" + std::string(name) + "'");
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "function,method,initializer,E,sigma,wins,seeds\n";
  for (const auto& c : report.cells) {
    out << c.function << ',' << to_string(c.method) << ',' << to_string(c.initializer) << ','
        << exact(c.mean_error) << ',' << exact(c.sigma) << ',' << (c.win ? 1 : 0) << ','
        << c.errors.size() << '\n';
  }
}

void write_report_json(std::ostream& out, const ExperimentReport& report) {
  json j;
  j["dim"] = report.dim;
  j["budget"] = report.budget;
  j["repeats"] = report.repeats;
  j["cells"] = json::array();
  for (const auto& c : report.cells) {
    json cell;
    cell["function"] = c.function;
    cell["method"] = to_string(c.method);
    cell["initializer"] = to_string(c.initializer);
    cell["E"] = number_or_null(c.mean_error);
    cell["sigma"] = number_or_null(c.sigma);
    cell["win"] = c.win;
    cell["seeds"] = c.seeds;
    cell["errors"] = c.errors;
    json failures = json::array();
    for (const auto& f : c.failures) failures.push_back({{"seed", f.seed}, {"message", f.message}});
    cell["failures"] = failures;
    j["cells"].push_back(std::move(cell));
  }
  out << j.dump(2) << '\n';
}

ExperimentReport read_report_json(std::istream& in) {
  const json j = json::parse(in);
  ExperimentReport report;
  report.dim = j.at("dim").get<std::size_t>();
  report.budget = j.at("budget").get<std::size_t>();
  report.repeats = j.at("repeats").get<std::size_t>();
  for (const auto& cell : j.at("cells")) {
    CellResult c;
    c.function = cell.at("function").get<std::string>();
    c.method = parse_local_method(cell.at("method").get<std::string>());
    c.initializer = parse_initializer(cell.at("initializer").get<std::string>());
    c.mean_error = number_or_nan(cell.at("E"));
    c.sigma = number_or_nan(cell.at("sigma"));
    c.win = cell.at("win").get<bool>();
    c.seeds = cell.at("seeds").get<std::vector<std::uint64_t>>();
    c.errors = cell.at("errors").get<std::vector<double>>();
    for (const auto& f : cell.at("failures")) {
      c.failures.push_back({f.at("seed").get<std::uint64_t>(), f.at("message").get<std::string>()});
    }
    report.cells.push_back(std::move(c));
  }
  return report;
}

void write_report_table(std::ostream& out, const ExperimentReport& report) {
  std::vector<LocalMethod> methods;
  std::vector<Initializer> inits;
  std::vector<std::string> functions;
  for (const auto& c : report.cells) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);
    if (std::find(inits.begin(), inits.end(), c.initializer) == inits.end()) inits.push_back(c.initializer);
    if (std::find(functions.begin(), functions.end(), c.function) == functions.end()) {
      functions.push_back(c.function);
    }
  }
  const int label = 16;
  const int col = 13;
  auto cell_text = [](const std::string& s, bool bold) { return bold ? "**" + s + "**" : s; };
  auto pad = [&out](const std::string& s, int w) {
    out << s;
    for (int i = static_cast<int>(s.size()); i < w; ++i) out << ' ';
  };

  out << "d = " << report.dim << ", M = " << report.budget << ", runs = " << report.repeats << "\n\n";
  pad("Function", label);
  pad("", 6);
  for (LocalMethod m : methods) {
    for (Initializer i : inits) pad(std::string(to_string(m)) + "/" + std::string(to_string(i)), col + 4);
  }
  out << '\n';
  pad("# of best", label);
  pad("", 6);
  for (LocalMethod m : methods) {
    for (Initializer i : inits) pad(std::to_string(report.wins(m, i)), col + 4);
  }
  out << '\n';
  for (const auto& fn : functions) {
    for (int row = 0; row < 2; ++row) {
      pad(row == 0 ? fn : "", label);
      pad(row == 0 ? "E" : "sigma", 6);
      for (LocalMethod m : methods) {
        for (Initializer i : inits) {
          const CellResult* c = report.find(fn, m, i);
          std::string text = "-";
          if (c) text = row == 0 ? cell_text(sci(c->mean_error), c->win) : sci(c->sigma);
          pad(text, col + 4);
        }
      }
      out << '\n';
    }
  }
  if (const std::size_t failed = report.failed_runs()) out << "\nfailed runs: " << failed << '\n';
}

std::filesystem::path emit_report(const ExperimentReport& report, ReportFormat format,
                                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const char* name = format == ReportFormat::csv    ? "report.csv"
                     : format == ReportFormat::json ? "report.json"
                                                    : "report.txt";
  const auto path = dir / name;
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  switch (format) {
    case ReportFormat::csv: write_report_csv(file, report); break;
    case ReportFormat::json: write_report_json(file, report); break;
    case ReportFormat::table: write_report_table(file, report); break;
  }
  file.flush();
  if (!file) throw std::runtime_error("cannot write " + path.string());
  return path;
}

std::string trace_file_name(std::string_view function, LocalMethod method, Initializer init,
                            std::uint64_t seed) {
  return std::string(function) + "_" + std::string(to_string(method)) + "_" +
         std::string(to_string(init)) + "_seed" + std::to_string(seed) + ".csv";
}

}  // namespace tesalocs
