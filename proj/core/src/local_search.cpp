#include "tesalocs/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "tesalocs/errors.hpp"
#include "tesalocs/random.hpp"

namespace tesalocs {

std::string_view to_string(LocalMethod m) {
  switch (m) {
    case LocalMethod::bfgs: return "bfgs";
    case LocalMethod::cg: return "cg";
    case LocalMethod::pso: return "pso";
    case LocalMethod::spsa: return "spsa";
    case LocalMethod::none: return "none";
  }
  return "?";
}

LocalMethod parse_local_method(std::string_view name) {
  if (name == "bfgs") return LocalMethod::bfgs;
  if (name == "cg") return LocalMethod::cg;
  if (name == "pso") return LocalMethod::pso;
  if (name == "spsa") return LocalMethod::spsa;
  if (name == "none") return LocalMethod::none;
  throw std::invalid_argument("unknown local method '" + std::string(name) + "'");
}

std::vector<double> numerical_gradient(MeteredObjective& f, std::span<const double> x,
                                       double fd_step) {
  const std::size_t d = x.size();
  if (f.remaining() < 2 * d) throw BudgetExhausted();
  std::vector<double> g(d);
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < d; ++i) {
    const double h = fd_step * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Thrown inside a run to end it; the caller keeps the best point so far.
struct StopRun {};

// Query accounting for one local run: per-run cap on top of the shared
// budget, plus the best finite evaluation seen.
class RunMeter {
 public:
  RunMeter(MeteredObjective& f, std::size_t cap, const LocalSearchConfig& cfg)
      : f_(f), cap_(cap), cfg_(cfg) {}

  double value(std::span<const double> x) {
    if (used_ >= cap_) throw StopRun{};
    double v;
    try {
      v = f_(x);
    } catch (const BudgetExhausted&) {
      exhausted_ = true;
      throw StopRun{};
    }
    ++used_;
    if (!std::isfinite(v)) {
      if (!has_point_) {
        best_.assign(x.begin(), x.end());
        best_value_ = v;
        has_point_ = true;
      }
      throw StopRun{};
    }
    if (!has_finite_ || v < best_value_) {
      best_.assign(x.begin(), x.end());
      best_value_ = v;
      has_finite_ = true;
      has_point_ = true;
    }
    return v;
  }

  double value(const VectorXd& x) { return value(std::span<const double>(x.data(), x.size())); }

  VectorXd gradient(const VectorXd& x) {
    const std::size_t d = static_cast<std::size_t>(x.size());
    std::span<const double> xs(x.data(), d);
    VectorXd g(x.size());
    const bool analytic = cfg_.gradient == GradientSource::automatic && f_.has_gradient();
    const std::size_t cost = analytic ? 1 : 2 * d;
    if (used_ + cost > cap_) throw StopRun{};
    if (f_.remaining() < cost) {
      exhausted_ = true;
      throw StopRun{};
    }
    if (analytic) {
      f_.gradient(xs, std::span<double>(g.data(), d));
    } else {
      auto num = numerical_gradient(f_, xs, cfg_.fd_step);
      std::copy(num.begin(), num.end(), g.data());
    }
    used_ += cost;
    if (!g.allFinite()) throw StopRun{};
    return g;
  }

  std::size_t used() const { return used_; }
  std::size_t cap() const { return cap_; }
  bool exhausted() const { return exhausted_; }
  bool has_point() const { return has_point_; }
  const Point& best() const { return best_; }
  double best_value() const { return best_value_; }

 private:
  MeteredObjective& f_;
  std::size_t cap_;
  const LocalSearchConfig& cfg_;
  std::size_t used_ = 0;
  bool exhausted_ = false;
  bool has_point_ = false;
  bool has_finite_ = false;
  Point best_;
  double best_value_ = std::numeric_limits<double>::infinity();
};

VectorXd to_eigen(const Point& p) { return Eigen::Map<const VectorXd>(p.data(), p.size()); }

// Backtracking from alpha0 until f(x + a p) <= fx + c1 a g.p. Each retreat
// goes to the minimizer of the parabola through f(0), f'(0) and f(alpha),
// kept within [0.1, backtrack] * alpha. When the first trial is accepted but
// that parabola puts the minimum elsewhere, its minimizer gets one extra
// query. On a quadratic both rules land on the exact line minimum.
// Returns false when no step is accepted.
bool armijo(RunMeter& meter, const VectorXd& x, double fx, const VectorXd& g, const VectorXd& p,
            double alpha0, const ArmijoParams& ls, VectorXd& x_new, double& f_new, double& alpha) {
  const double slope = g.dot(p);
  alpha = alpha0;
  for (std::size_t j = 0; j <= ls.max_backtracks; ++j) {
    x_new = x + alpha * p;
    f_new = meter.value(x_new);
    const double curvature = f_new - fx - slope * alpha;
    const double vertex = curvature > 0.0 ? -slope * alpha * alpha / (2.0 * curvature) : 0.0;
    if (f_new <= fx + ls.c1 * alpha * slope) {
      if (j == 0 && std::isfinite(vertex) && vertex > 0.0 && std::abs(vertex - alpha) > 0.1 * alpha) {
        const VectorXd x_try = x + vertex * p;
        const double f_try = meter.value(x_try);
        if (f_try < f_new) {
          x_new = x_try;
          f_new = f_try;
          alpha = vertex;
        }
      }
      return true;
    }
    const double shrink = vertex > 0.0 && std::isfinite(vertex) ? vertex / alpha : ls.backtrack;
    alpha *= std::clamp(shrink, 0.1, ls.backtrack);
  }
  return false;
}

bool converged(double f_old, double f_new, double tol) {
  return std::abs(f_old - f_new) <= tol * std::max(1.0, std::abs(f_old));
}

void run_bfgs(RunMeter& meter, const Point& start, const LocalSearchConfig& cfg) {
  VectorXd x = to_eigen(start);
  const auto n = x.size();
  double fx = meter.value(x);
  VectorXd g = meter.gradient(x);
  MatrixXd h = MatrixXd::Identity(n, n);
  bool first = true;
  VectorXd x_new(n);
  while (g.norm() >= cfg.gradient_tolerance) {
    VectorXd p = -h * g;
    if (g.dot(p) >= 0.0) {
      h.setIdentity();
      p = -g;
      first = true;
    }
    // unit first step in x-space until curvature information exists
    const double alpha0 = first ? std::min(1.0, 1.0 / p.norm()) : 1.0;
    double f_new, alpha;
    if (!armijo(meter, x, fx, g, p, alpha0, cfg.line_search, x_new, f_new, alpha)) {
      if (first) break;
      h.setIdentity();
      first = true;
      continue;
    }
    VectorXd g_new = meter.gradient(x_new);
    const VectorXd s = x_new - x;
    const VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (first) h *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const VectorXd hy = h * y;
      h += (rho * rho * (sy + y.dot(hy))) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
      first = false;
    }
    const bool done = converged(fx, f_new, cfg.value_tolerance);
    x = x_new;
    fx = f_new;
    g = std::move(g_new);
    if (done) break;
  }
}

// Polak-Ribiere+ with restart to steepest descent on non-descent directions.
void run_cg(RunMeter& meter, const Point& start, const LocalSearchConfig& cfg) {
  VectorXd x = to_eigen(start);
  double fx = meter.value(x);
  VectorXd g = meter.gradient(x);
  VectorXd p = -g;
  bool steepest = true;
  double f_prev = std::numeric_limits<double>::quiet_NaN();
  VectorXd x_new(x.size());
  while (g.norm() >= cfg.gradient_tolerance) {
    double slope = g.dot(p);
    if (slope >= 0.0) {
      p = -g;
      slope = -g.squaredNorm();
      steepest = true;
    }
    // initial trial from the last decrease, assuming a quadratic along p
    double alpha0 = std::min(1.0, 1.0 / p.norm());
    if (std::isfinite(f_prev)) {
      const double guess = 1.01 * 2.0 * (fx - f_prev) / slope;
      if (guess > 0.0 && std::isfinite(guess)) alpha0 = std::min(1.0, guess);
    }
    double f_new, alpha;
    if (!armijo(meter, x, fx, g, p, alpha0, cfg.line_search, x_new, f_new, alpha)) {
      if (steepest) break;
      p = -g;
      steepest = true;
      f_prev = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    VectorXd g_new = meter.gradient(x_new);
    const double beta = std::max(0.0, g_new.dot(g_new - g) / g.squaredNorm());
    p = -g_new + beta * p;
    steepest = beta == 0.0;
    const bool done = converged(fx, f_new, cfg.value_tolerance);
    f_prev = fx;
    x = x_new;
    fx = f_new;
    g = std::move(g_new);
    if (done) break;
  }
}

void run_pso(RunMeter& meter, const Point& start, const SearchSpace& box,
             const LocalSearchConfig& cfg, Rng& rng) {
  const PsoParams& pp = cfg.pso;
  const std::size_t d = start.size();
  const std::size_t swarm = std::max<std::size_t>(pp.swarm_size, 1);
  std::vector<Point> pos(swarm, start);
  std::vector<Point> vel(swarm, Point(d, 0.0));
  std::vector<double> width(d);
  for (std::size_t i = 0; i < d; ++i) width[i] = box.upper()[i] - box.lower()[i];
  for (std::size_t s = 1; s < swarm; ++s) {
    for (std::size_t i = 0; i < d; ++i) {
      const double r = pp.init_radius * width[i];
      pos[s][i] = uniform(rng, start[i] - r, start[i] + r);
    }
    pos[s] = box.clamp(pos[s]);
  }
  std::vector<Point> best_pos = pos;
  std::vector<double> best_val(swarm, std::numeric_limits<double>::infinity());
  Point global = start;
  double global_val = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < swarm; ++s) {
    best_val[s] = meter.value(pos[s]);
    if (best_val[s] < global_val) {
      global_val = best_val[s];
      global = pos[s];
    }
  }
  const std::size_t max_generations = 1'000'000;
  for (std::size_t gen = 0; gen < max_generations; ++gen) {
    double speed = 0.0;
    for (std::size_t s = 0; s < swarm; ++s) {
      for (std::size_t i = 0; i < d; ++i) {
        const double r1 = uniform01(rng);
        const double r2 = uniform01(rng);
        double v = pp.inertia * vel[s][i] + pp.cognitive * r1 * (best_pos[s][i] - pos[s][i]) +
                   pp.social * r2 * (global[i] - pos[s][i]);
        v = std::clamp(v, -width[i], width[i]);
        vel[s][i] = v;
        pos[s][i] = std::clamp(pos[s][i] + v, box.lower()[i], box.upper()[i]);
        speed = std::max(speed, std::abs(v) / width[i]);
      }
      const double val = meter.value(pos[s]);
      if (val < best_val[s]) {
        best_val[s] = val;
        best_pos[s] = pos[s];
        if (val < global_val) {
          global_val = val;
          global = pos[s];
        }
      }
    }
    if (speed < 1e-14) break;
  }
}

void run_spsa(RunMeter& meter, const Point& start, const SearchSpace& box,
              const LocalSearchConfig& cfg, Rng& rng) {
  const SpsaParams& sp = cfg.spsa;
  const std::size_t d = start.size();
  std::vector<double> width(d);
  for (std::size_t i = 0; i < d; ++i) width[i] = box.upper()[i] - box.lower()[i];
  // z in [0, 1]^d, x = a + z * width
  std::vector<double> z(d);
  for (std::size_t i = 0; i < d; ++i) z[i] = (start[i] - box.lower()[i]) / width[i];
  auto to_x = [&](const std::vector<double>& zz) {
    Point x(d);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = box.lower()[i] + std::clamp(zz[i], 0.0, 1.0) * width[i];
    }
    return x;
  };
  meter.value(to_x(z));
  double gain = -1.0;
  std::vector<double> delta(d), zp(d), zm(d);
  // Only z +- c_k delta get evaluated inside the loop, so one query stays in
  // reserve for the final iterate.
  const std::size_t max_iterations = 1'000'000;
  for (std::size_t k = 0; k < max_iterations && meter.used() + 3 <= meter.cap(); ++k) {
    const double ck = sp.c / std::pow(static_cast<double>(k + 1), sp.gamma);
    for (std::size_t i = 0; i < d; ++i) {
      delta[i] = (rng() & 1ULL) ? 1.0 : -1.0;
      zp[i] = std::clamp(z[i] + ck * delta[i], 0.0, 1.0);
      zm[i] = std::clamp(z[i] - ck * delta[i], 0.0, 1.0);
    }
    const double fp = meter.value(to_x(zp));
    const double fm = meter.value(to_x(zm));
    const double diff = (fp - fm) / (2.0 * ck);
    if (gain < 0.0) {
      // a chosen so the first step is about initial_step per coordinate
      const double mag = std::abs(diff);
      gain = mag > 0.0 ? sp.initial_step * std::pow(sp.stability + 1.0, sp.alpha) / mag : 0.0;
      if (gain == 0.0) continue;
    }
    const double ak = gain / std::pow(static_cast<double>(k + 1) + sp.stability, sp.alpha);
    for (std::size_t i = 0; i < d; ++i) z[i] = std::clamp(z[i] - ak * diff * delta[i], 0.0, 1.0);
  }
  meter.value(to_x(z));
}

}  // namespace

LocalSearchResult refine(MeteredObjective& f, std::span<const Point> starts,
                         const SearchSpace& box, const LocalSearchConfig& cfg) {
  if (starts.empty()) throw std::invalid_argument("refine: no starting points");
  if (box.dim() != f.dim()) throw std::invalid_argument("refine: box and objective dimensions differ");
  const std::size_t cap = cfg.max_evals_per_candidate.value_or(std::numeric_limits<std::size_t>::max());
  if (cap == 0) throw std::invalid_argument("refine: per-candidate cap must be positive");

  LocalSearchResult result;
  result.refined_points.reserve(starts.size());
  result.values.reserve(starts.size());
  for (std::size_t l = 0; l < starts.size(); ++l) {
    const Point start = box.clamp(starts[l]);
    RunMeter meter(f, cap, cfg);
    Rng rng(mix_seed(cfg.seed, l));
    try {
      switch (cfg.method) {
        case LocalMethod::bfgs: run_bfgs(meter, start, cfg); break;
        case LocalMethod::cg: run_cg(meter, start, cfg); break;
        case LocalMethod::pso: run_pso(meter, start, box, cfg, rng); break;
        case LocalMethod::spsa: run_spsa(meter, start, box, cfg, rng); break;
        case LocalMethod::none: meter.value(start); break;
      }
    } catch (const StopRun&) {
    }
    result.evals_spent += meter.used();
    if (meter.has_point()) {
      result.refined_points.push_back(meter.best());
      result.values.push_back(meter.best_value());
    }
    if (meter.exhausted()) {
      result.budget_exhausted = true;
      break;
    }
  }
  return result;
}

}  // namespace tesalocs
