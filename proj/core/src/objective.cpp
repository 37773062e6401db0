#include "tesalocs/objective.hpp"

#include <limits>
#include <stdexcept>

#include "tesalocs/errors.hpp"

namespace tesalocs {

MeteredObjective::MeteredObjective(Objective target, std::optional<std::size_t> cap)
    : target_(std::move(target)), cap_(cap) {
  if (!target_.value) throw std::invalid_argument("objective has no value function");
  if (target_.dim == 0) throw std::invalid_argument("objective dimension must be positive");
}

void MeteredObjective::charge() {
  if (!cap_) {
    used_.fetch_add(1);
    return;
  }
  std::size_t cur = used_.load();
  do {
    if (cur >= *cap_) throw BudgetExhausted();
  } while (!used_.compare_exchange_weak(cur, cur + 1));
}

double MeteredObjective::operator()(std::span<const double> x) {
  if (x.size() != target_.dim) throw std::invalid_argument("objective: dimension mismatch");
  charge();
  return target_.value(x);
}

void MeteredObjective::gradient(std::span<const double> x, std::span<double> out) {
  if (!target_.gradient) throw std::logic_error("objective has no analytic gradient");
  if (x.size() != target_.dim || out.size() != target_.dim) {
    throw std::invalid_argument("gradient: dimension mismatch");
  }
  charge();
  target_.gradient(x, out);
}

std::size_t MeteredObjective::remaining() const {
  if (!cap_) return std::numeric_limits<std::size_t>::max();
  const std::size_t used = used_.load();
  return used >= *cap_ ? 0 : *cap_ - used;
}

}  // namespace tesalocs
