// Independent reference computations for the tests: brute-force tensor
// enumeration and finite differences. Nothing here shares code paths with
// the library beyond the TTCore storage layout.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "tesalocs/tt_core.hpp"

namespace oracle {

using tesalocs::MultiIndex;
using tesalocs::TTDistribution;

// All multi-indices of a grid with the given mode sizes, last mode fastest.
inline std::vector<MultiIndex> enumerate(const std::vector<std::size_t>& dims) {
  std::vector<MultiIndex> out;
  MultiIndex idx(dims.size(), 0);
  while (true) {
    out.push_back(idx);
    std::size_t i = dims.size();
    while (i > 0) {
      --i;
      if (++idx[i] < dims[i]) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
    if (dims.empty()) return out;
  }
}

// Entry of the full tensor by explicit sum over every rank path.
inline double entry(const TTDistribution& t, const MultiIndex& n) {
  const std::size_t d = t.order();
  // Depth-first over rank indices; fine for the tiny ranks used in tests.
  std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t a) -> double {
    if (i == d) return 1.0;
    const auto& c = t.core(i);
    double s = 0.0;
    for (std::size_t b = 0; b < c.right; ++b) {
      s += c.data[(a * c.modes + n[i]) * c.right + b] * rec(i + 1, b);
    }
    return s;
  };
  return rec(0, 0);
}

// Full tensor, in enumerate() order.
inline std::vector<double> full_tensor(const TTDistribution& t) {
  std::vector<double> out;
  for (const auto& n : enumerate(t.dims())) out.push_back(entry(t, n));
  return out;
}

inline double total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// -sum log(p(n)) by brute force.
inline double nll(const TTDistribution& t, const std::vector<MultiIndex>& elites) {
  const double z = total(full_tensor(t));
  double loss = 0.0;
  for (const auto& n : elites) loss -= std::log(entry(t, n) / z);
  return loss;
}

// Central-difference derivative of `f` with respect to every core entry.
inline std::vector<std::vector<double>> fd_core_gradient(
    const TTDistribution& t, const std::function<double(const TTDistribution&)>& f,
    double h = 1e-6) {
  std::vector<std::vector<double>> g(t.order());
  TTDistribution probe = t;
  for (std::size_t i = 0; i < t.order(); ++i) {
    auto& data = probe.core(i).data;
    g[i].resize(data.size());
    for (std::size_t j = 0; j < data.size(); ++j) {
      const double x = data[j];
      const double step = h * std::max(1.0, std::abs(x));
      data[j] = x + step;
      const double up = f(probe);
      data[j] = x - step;
      const double down = f(probe);
      data[j] = x;
      g[i][j] = (up - down) / (2.0 * step);
    }
  }
  return g;
}

// Central-difference gradient of a scalar function of a point.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double step = h * std::max(1.0, std::abs(xi));
    x[i] = xi + step;
    const double up = f(x);
    x[i] = xi - step;
    const double down = f(x);
    x[i] = xi;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

// Random TT with entries in [lo, 1], ranks all r, without library helpers.
inline TTDistribution random_tt(std::size_t d, std::size_t n, std::size_t r, std::mt19937_64& rng,
                                double lo = 0.05) {
  std::uniform_real_distribution<double> u(lo, 1.0);
  std::vector<tesalocs::TTCore> cores;
  for (std::size_t i = 0; i < d; ++i) {
    tesalocs::TTCore c(i == 0 ? 1 : r, n, i + 1 == d ? 1 : r);
    for (double& x : c.data) x = u(rng);
    cores.push_back(std::move(c));
  }
  return TTDistribution(std::move(cores));
}

// Separable trap on [0, 10]^d: each coordinate scores 0 at x <= 0.5 and
// 1 - 0.08 x beyond, so the per-coordinate slope leads away from the optimum
// at x = 0 towards the local optimum 0.2 at x = 10.
inline double trap(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v <= 0.5 ? 0.0 : 1.0 - 0.08 * v;
  return s;
}

}  // namespace oracle
