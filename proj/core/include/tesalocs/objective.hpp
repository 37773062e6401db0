#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>

namespace tesalocs {

/// Black-box target f: R^d -> R, optionally with an analytic gradient.
struct Objective {
  using Value = std::function<double(std::span<const double>)>;
  using Gradient = std::function<void(std::span<const double>, std::span<double>)>;

  std::size_t dim = 0;
  Value value;
  /// Empty when only values are available.
  Gradient gradient;
};

/// Counts every query made to an Objective and enforces an optional cap.
///
/// A value evaluation is one query; a finite-difference gradient is made of
/// value evaluations and costs 2d; an analytic gradient call costs one query.
/// Once the cap is reached every further query throws BudgetExhausted and is
/// not counted. The counter is atomic so independent runs may share it.
class MeteredObjective {
 public:
  explicit MeteredObjective(Objective target, std::optional<std::size_t> cap = std::nullopt);

  MeteredObjective(const MeteredObjective&) = delete;
  MeteredObjective& operator=(const MeteredObjective&) = delete;

  std::size_t dim() const { return target_.dim; }
  bool has_gradient() const { return static_cast<bool>(target_.gradient); }

  double operator()(std::span<const double> x);
  /// Analytic gradient; throws std::logic_error when the target has none.
  void gradient(std::span<const double> x, std::span<double> out);

  std::size_t evaluations_used() const { return used_.load(); }
  std::optional<std::size_t> evaluation_cap() const { return cap_; }
  void set_evaluation_cap(std::optional<std::size_t> cap) { cap_ = cap; }
  /// Queries left before the cap; SIZE_MAX when uncapped.
  std::size_t remaining() const;

 private:
  void charge();

  Objective target_;
  std::optional<std::size_t> cap_;
  std::atomic<std::size_t> used_{0};
};

}  // namespace tesalocs
