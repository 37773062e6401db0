#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tesalocs/grid.hpp"
#include "tesalocs/objective.hpp"

namespace tesalocs {

/// Analytic test function defined for any dimension d >= min_dim.
struct BenchmarkFunction {
  struct Bounds {
    double lower;
    double upper;
  };

  /// Lower-case identifier used on the command line.
  std::string name;
  std::string display_name;
  /// The formula as implemented, 1-based indices.
  std::string formula;
  std::size_t min_dim = 1;
  std::function<Bounds(std::size_t d)> box;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  std::function<double(std::size_t d)> minimum_value;
  /// Empty for functions without a closed-form minimizer.
  std::function<std::optional<Point>(std::size_t d)> minimizer;

  /// Objective of fixed dimension d; rejects inputs of any other length.
  Objective objective(std::size_t d) const;
  SearchSpace search_space(std::size_t d, std::size_t nodes) const;
};

/// Evaluates fn at x. Throws std::invalid_argument when x.size() < min_dim.
double evaluate(const BenchmarkFunction& fn, std::span<const double> x);

/// The 20 built-in functions, in table order: Ackley, Alpine, Chung, Dixon,
/// Exp, Griewank, Pathological, Pinter, Powell, Qing, Rastrigin, Rosenbrock,
/// Salomon, Schaffer, Sphere, Squares, Trid, Trigonometric, Wavy, Yang.
const std::vector<BenchmarkFunction>& catalog();

/// Adds a user function; it becomes addressable by name next to the
/// built-ins. User functions are value-only, so gradient-based local search
/// differentiates them numerically. Throws std::invalid_argument on a
/// duplicate name or when `gradient` is set.
void register_function(BenchmarkFunction fn);

/// Built-ins followed by registered functions.
std::vector<BenchmarkFunction> all_functions();

/// Case-insensitive lookup over all functions. Throws std::invalid_argument
/// when the name is unknown.
const BenchmarkFunction& find_function(std::string_view name);

/// Dixon-Price local-minimum value (2/3) that gradient methods commonly stall
/// at in high dimension. A landmark, not the global minimum.
inline constexpr double kDixonPriceLocalPlateau = 2.0 / 3.0;

}  // namespace tesalocs
