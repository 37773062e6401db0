#pragma once

#include <stdexcept>
#include <string>

namespace tesalocs {

/// The TT model lost all probability mass (Z underflowed to zero) or
/// produced non-finite values.
class DegenerateModelError : public std::runtime_error {
 public:
  explicit DegenerateModelError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised by MeteredObjective when an evaluation is attempted past its cap.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

}  // namespace tesalocs
