#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tesalocs/driver.hpp"
#include "tesalocs/local_search.hpp"

namespace tesalocs {

/// How a cell picks its local-search starts.
enum class Initializer { random, tesalocs };

std::string_view to_string(Initializer i);
/// Accepts "random" and "tesalocs"; throws std::invalid_argument otherwise.
Initializer parse_initializer(std::string_view name);

/// Errors below this count as converged; two converged arms both win.
inline constexpr double kCoConvergence = 1e-8;

struct ExperimentSpec {
  std::vector<std::string> functions;
  std::size_t dim = 100;
  std::size_t repeats = 10;
  std::vector<LocalMethod> methods{LocalMethod::bfgs};
  std::vector<Initializer> initializers{Initializer::random, Initializer::tesalocs};
  /// Shared run settings; local.method and seed are set per cell and run.
  TesalocsConfig config;
  /// Run s of every cell uses seed seed0 + s.
  std::uint64_t seed0 = 0;
  /// Worker threads; 1 runs everything sequentially in cell order.
  std::size_t jobs = 1;
  /// When set, every run writes its trace CSV here.
  std::optional<std::filesystem::path> trace_dir;

  /// Throws std::invalid_argument on bad counts or unknown function names.
  void validate() const;
};

struct RunFailure {
  std::uint64_t seed = 0;
  std::string message;
};

/// One (function, method, initializer) row.
struct CellResult {
  std::string function;
  LocalMethod method = LocalMethod::bfgs;
  Initializer initializer = Initializer::random;
  /// Seeds of the runs that finished, ascending, with their |best - f*|.
  std::vector<std::uint64_t> seeds;
  std::vector<double> errors;
  std::vector<RunFailure> failures;
  /// E: mean error; NaN when no run finished.
  double mean_error = std::numeric_limits<double>::quiet_NaN();
  /// Sample standard deviation of the errors; 0 for a single run.
  double sigma = std::numeric_limits<double>::quiet_NaN();
  bool win = false;
};

struct ExperimentReport {
  std::size_t dim = 0;
  std::size_t budget = 0;
  std::size_t repeats = 0;
  std::vector<CellResult> cells;

  std::size_t failed_runs() const;
  /// Rows of `method` won by `init`.
  std::size_t wins(LocalMethod method, Initializer init) const;
  const CellResult* find(std::string_view function, LocalMethod method, Initializer init) const;
};

/// Mean and sample standard deviation, summed in sorted order so the result
/// does not depend on the order of `errors`.
std::pair<double, double> aggregate(std::vector<double> errors);

/// Marks wins within each (function, method) group: the lowest E wins (ties
/// share), and every arm wins when all of them are below kCoConvergence.
/// Rows without a rival never win.
void assign_wins(std::vector<CellResult>& cells);

/// A single run of one cell; returns the trace, whose best value gives the error.
RunTrace run_cell(const std::string& function, LocalMethod method, Initializer init,
                  std::size_t dim, const TesalocsConfig& config, std::uint64_t seed);

/// Runs every cell for seeds seed0 .. seed0 + repeats - 1. A run that throws
/// is recorded as a failure of its cell and left out of E and sigma.
ExperimentReport run_experiment(const ExperimentSpec& spec);

enum class ReportFormat { csv, json, table };
/// Throws std::invalid_argument for an unknown name.
ReportFormat parse_report_format(std::string_view name);

/// Columns function,method,initializer,E,sigma,wins,seeds.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
void write_report_json(std::ostream& out, const ExperimentReport& report);
/// One block per function with E and sigma rows, arms side by side per
/// method; winning entries are wrapped in ** **. Win counts head the table.
void write_report_table(std::ostream& out, const ExperimentReport& report);
ExperimentReport read_report_json(std::istream& in);

/// Writes report.csv, report.json or report.txt into `dir` (created if
/// missing) and returns the file path. Throws std::runtime_error when the
/// file cannot be written.
std::filesystem::path emit_report(const ExperimentReport& report, ReportFormat format,
                                  const std::filesystem::path& dir);

/// `<function>_<method>_<initializer>_seed<seed>.csv`.
std::string trace_file_name(std::string_view function, LocalMethod method, Initializer init,
                            std::uint64_t seed);

}  // namespace tesalocs
