#include "tesalocs/benchmarks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace tesalocs {

namespace {

using std::numbers::pi;
using std::numbers::e;
using Span = std::span<const double>;
using Grad = std::span<double>;

double sgn(double v) { return (v > 0.0) - (v < 0.0); }
double w(std::size_t i) { return static_cast<double>(i + 1); }  // 1-based weight

auto fixed_box(double lo, double hi) {
  return [lo, hi](std::size_t) { return BenchmarkFunction::Bounds{lo, hi}; };
}
auto zero_min() {
  return [](std::size_t) { return 0.0; };
}
auto origin() {
  return [](std::size_t d) -> std::optional<Point> { return Point(d, 0.0); };
}

double sum_sq(Span x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// Ackley: -20 exp(-0.2 sqrt(sum x^2 / d)) - exp(sum cos(2 pi x) / d) + 20 + e
double ackley(Span x) {
  const double d = static_cast<double>(x.size());
  double c = 0.0;
  for (double v : x) c += std::cos(2.0 * pi * v);
  return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq(x) / d)) - std::exp(c / d) + 20.0 + e;
}
void ackley_grad(Span x, Grad g) {
  const double d = static_cast<double>(x.size());
  double c = 0.0;
  for (double v : x) c += std::cos(2.0 * pi * v);
  const double r = std::sqrt(sum_sq(x) / d);
  const double ea = std::exp(-0.2 * r);
  const double ec = std::exp(c / d);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double radial = r > 0.0 ? 4.0 * ea * x[i] / (d * r) : 0.0;
    g[i] = radial + 2.0 * pi / d * ec * std::sin(2.0 * pi * x[i]);
  }
}

// Alpine N.1: sum |x sin x + 0.1 x|
double alpine(Span x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v * std::sin(v) + 0.1 * v);
  return s;
}
void alpine_grad(Span x, Grad g) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    g[i] = sgn(v * std::sin(v) + 0.1 * v) * (std::sin(v) + v * std::cos(v) + 0.1);
  }
}

// Chung-Reynolds: (sum x^2)^2
double chung(Span x) {
  const double s = sum_sq(x);
  return s * s;
}
void chung_grad(Span x, Grad g) {
  const double s = sum_sq(x);
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 4.0 * s * x[i];
}

// Dixon-Price: (x_1 - 1)^2 + sum_{i>=2} i (2 x_i^2 - x_{i-1})^2
double dixon(Span x) {
  double s = (x[0] - 1.0) * (x[0] - 1.0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double t = 2.0 * x[i] * x[i] - x[i - 1];
    s += w(i) * t * t;
  }
  return s;
}
void dixon_grad(Span x, Grad g) {
  std::fill(g.begin(), g.end(), 0.0);
  g[0] = 2.0 * (x[0] - 1.0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double t = 2.0 * x[i] * x[i] - x[i - 1];
    g[i] += 8.0 * w(i) * t * x[i];
    g[i - 1] -= 2.0 * w(i) * t;
  }
}
std::optional<Point> dixon_argmin(std::size_t d) {
  Point x(d);
  for (std::size_t i = 0; i < d; ++i) {
    // x_i = 2^{-(2^i - 2) / 2^i} = 2^{-1 + 2^{1-i}}
    x[i] = std::exp2(-1.0 + std::exp2(1.0 - w(i)));
  }
  return x;
}

// Exponential: -exp(-0.5 sum x^2)
double expo(Span x) { return -std::exp(-0.5 * sum_sq(x)); }
void expo_grad(Span x, Grad g) {
  const double ex = std::exp(-0.5 * sum_sq(x));
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = ex * x[i];
}

// Griewank: 1 + sum x^2 / 4000 - prod cos(x_i / sqrt(i))
double griewank(Span x) {
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) p *= std::cos(x[i] / std::sqrt(w(i)));
  return 1.0 + sum_sq(x) / 4000.0 - p;
}
void griewank_grad(Span x, Grad g) {
  const std::size_t d = x.size();
  std::vector<double> c(d), before(d + 1, 1.0), after(d + 1, 1.0);
  for (std::size_t i = 0; i < d; ++i) c[i] = std::cos(x[i] / std::sqrt(w(i)));
  for (std::size_t i = 0; i < d; ++i) before[i + 1] = before[i] * c[i];
  for (std::size_t i = d; i-- > 0;) after[i] = after[i + 1] * c[i];
  for (std::size_t i = 0; i < d; ++i) {
    const double si = std::sqrt(w(i));
    g[i] = x[i] / 2000.0 + std::sin(x[i] / si) / si * before[i] * after[i + 1];
  }
}

// Pathological: sum_{i<d} 0.5 + (sin^2 sqrt(100 x_i^2 + x_{i+1}^2) - 0.5)
//                               / (1 + 0.001 (x_i - x_{i+1})^4)
double pathological(Span x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i], b = x[i + 1];
    const double sn = std::sin(std::sqrt(100.0 * a * a + b * b));
    const double q = (a - b) * (a - b);
    s += 0.5 + (sn * sn - 0.5) / (1.0 + 0.001 * q * q);
  }
  return s;
}
void pathological_grad(Span x, Grad g) {
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i], b = x[i + 1];
    const double u = std::sqrt(100.0 * a * a + b * b);
    const double sn = std::sin(u);
    const double num = sn * sn - 0.5;
    const double diff = a - b;
    const double den = 1.0 + 0.001 * diff * diff * diff * diff;
    const double s2u_over_u = u > 0.0 ? std::sin(2.0 * u) / u : 2.0;
    const double dnum_a = s2u_over_u * 100.0 * a;
    const double dnum_b = s2u_over_u * b;
    const double dden = 0.004 * diff * diff * diff;  // d/da; d/db is the negative
    g[i] += (dnum_a * den - num * dden) / (den * den);
    g[i + 1] += (dnum_b * den + num * dden) / (den * den);
  }
}

// Pinter, cyclic x_0 = x_d, x_{d+1} = x_1:
//   sum i x_i^2 + sum 20 i sin^2(A_i) + sum i log10(1 + i B_i^2)
//   A_i = x_{i-1} sin x_i + sin x_{i+1}
//   B_i = x_{i-1}^2 - 2 x_i + 3 x_{i+1} - cos x_i + 1
double pinter(Span x) {
  const std::size_t d = x.size();
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double prev = x[(i + d - 1) % d], cur = x[i], next = x[(i + 1) % d];
    const double a = prev * std::sin(cur) + std::sin(next);
    const double b = prev * prev - 2.0 * cur + 3.0 * next - std::cos(cur) + 1.0;
    const double sa = std::sin(a);
    s += w(i) * cur * cur + 20.0 * w(i) * sa * sa + w(i) * std::log10(1.0 + w(i) * b * b);
  }
  return s;
}
void pinter_grad(Span x, Grad g) {
  const std::size_t d = x.size();
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t ip = (i + d - 1) % d, in = (i + 1) % d;
    const double prev = x[ip], cur = x[i], next = x[in];
    const double a = prev * std::sin(cur) + std::sin(next);
    const double b = prev * prev - 2.0 * cur + 3.0 * next - std::cos(cur) + 1.0;
    const double da = 20.0 * w(i) * std::sin(2.0 * a);
    const double db = w(i) * 2.0 * w(i) * b / ((1.0 + w(i) * b * b) * std::log(10.0));
    g[i] += 2.0 * w(i) * cur;
    g[ip] += da * std::sin(cur) + db * 2.0 * prev;
    g[i] += da * prev * std::cos(cur) + db * (std::sin(cur) - 2.0);
    g[in] += da * std::cos(next) + db * 3.0;
  }
}

// Powell sum: sum |x_i|^{i+1}
double powell(Span x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), w(i) + 1.0);
  return s;
}
void powell_grad(Span x, Grad g) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = (w(i) + 1.0) * std::pow(std::abs(x[i]), w(i)) * sgn(x[i]);
  }
}

// Qing: sum (x_i^2 - i)^2
double qing(Span x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] * x[i] - w(i);
    s += t * t;
  }
  return s;
}
void qing_grad(Span x, Grad g) {
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 4.0 * x[i] * (x[i] * x[i] - w(i));
}

// Rastrigin: 10 d + sum (x^2 - 10 cos(2 pi x))
double rastrigin(Span x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * pi * v);
  return s;
}
void rastrigin_grad(Span x, Grad g) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = 2.0 * x[i] + 20.0 * pi * std::sin(2.0 * pi * x[i]);
  }
}

// Rosenbrock: sum_{i<d} 100 (x_{i+1} - x_i^2)^2 + (x_i - 1)^2
double rosenbrock(Span x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double t = x[i + 1] - x[i] * x[i];
    s += 100.0 * t * t + (x[i] - 1.0) * (x[i] - 1.0);
  }
  return s;
}
void rosenbrock_grad(Span x, Grad g) {
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double t = x[i + 1] - x[i] * x[i];
    g[i] += -400.0 * t * x[i] + 2.0 * (x[i] - 1.0);
    g[i + 1] += 200.0 * t;
  }
}

// Salomon: 1 - cos(2 pi r) + 0.1 r, r = ||x||
double salomon(Span x) {
  const double r = std::sqrt(sum_sq(x));
  return 1.0 - std::cos(2.0 * pi * r) + 0.1 * r;
}
void salomon_grad(Span x, Grad g) {
  const double r = std::sqrt(sum_sq(x));
  const double k = r > 0.0 ? (2.0 * pi * std::sin(2.0 * pi * r) + 0.1) / r : 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = k * x[i];
}

// Generalized Schaffer F6: sum_{i<d} 0.5 + (sin^2 sqrt(x_i^2 + x_{i+1}^2) - 0.5)
//                                         / (1 + 0.001 (x_i^2 + x_{i+1}^2))^2
double schaffer(Span x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double q = x[i] * x[i] + x[i + 1] * x[i + 1];
    const double sn = std::sin(std::sqrt(q));
    const double den = 1.0 + 0.001 * q;
    s += 0.5 + (sn * sn - 0.5) / (den * den);
  }
  return s;
}
void schaffer_grad(Span x, Grad g) {
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i], b = x[i + 1];
    const double q = a * a + b * b;
    const double u = std::sqrt(q);
    const double sn = std::sin(u);
    const double num = sn * sn - 0.5;
    const double base = 1.0 + 0.001 * q;
    const double den = base * base;
    const double s2u_over_u = u > 0.0 ? std::sin(2.0 * u) / u : 2.0;
    // d num / dv = sin(2u)/u * v ; d den / dv = 0.004 base v
    for (int k = 0; k < 2; ++k) {
      const double v = k == 0 ? a : b;
      const double dnum = s2u_over_u * v;
      const double dden = 0.004 * base * v;
      g[i + k] += (dnum * den - num * dden) / (den * den);
    }
  }
}

// Sphere: sum x^2
double sphere(Span x) { return sum_sq(x); }
void sphere_grad(Span x, Grad g) {
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
}

// Sum squares: sum i x_i^2
double squares(Span x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w(i) * x[i] * x[i];
  return s;
}
void squares_grad(Span x, Grad g) {
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * w(i) * x[i];
}

// Trid: sum (x_i - 1)^2 - sum_{i>=2} x_i x_{i-1}
double trid(Span x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += (x[i] - 1.0) * (x[i] - 1.0);
    if (i > 0) s -= x[i] * x[i - 1];
  }
  return s;
}
void trid_grad(Span x, Grad g) {
  const std::size_t d = x.size();
  for (std::size_t i = 0; i < d; ++i) {
    g[i] = 2.0 * (x[i] - 1.0);
    if (i > 0) g[i] -= x[i - 1];
    if (i + 1 < d) g[i] -= x[i + 1];
  }
}

// Trigonometric 1: sum_i [d - sum_j cos x_j + i (1 - cos x_i - sin x_i)]^2
double trigonometric(Span x) {
  const double d = static_cast<double>(x.size());
  double c = 0.0;
  for (double v : x) c += std::cos(v);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = d - c + w(i) * (1.0 - std::cos(x[i]) - std::sin(x[i]));
    s += t * t;
  }
  return s;
}
void trigonometric_grad(Span x, Grad g) {
  const double d = static_cast<double>(x.size());
  double c = 0.0;
  for (double v : x) c += std::cos(v);
  std::vector<double> t(x.size());
  double tsum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    t[i] = d - c + w(i) * (1.0 - std::cos(x[i]) - std::sin(x[i]));
    tsum += t[i];
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    g[j] = 2.0 * tsum * std::sin(x[j]) +
           2.0 * t[j] * w(j) * (std::sin(x[j]) - std::cos(x[j]));
  }
}

// Wavy (k = 10): 1 - (1/d) sum cos(10 x_i) exp(-x_i^2 / 2)
double wavy(Span x) {
  double s = 0.0;
  for (double v : x) s += std::cos(10.0 * v) * std::exp(-0.5 * v * v);
  return 1.0 - s / static_cast<double>(x.size());
}
void wavy_grad(Span x, Grad g) {
  const double d = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    g[i] = std::exp(-0.5 * v * v) * (10.0 * std::sin(10.0 * v) + v * std::cos(10.0 * v)) / d;
  }
}

// Xin-She Yang N.2: (sum |x_i|) exp(-sum sin(x_i^2))
double yang(Span x) {
  double a = 0.0, s = 0.0;
  for (double v : x) {
    a += std::abs(v);
    s += std::sin(v * v);
  }
  return a * std::exp(-s);
}
void yang_grad(Span x, Grad g) {
  double a = 0.0, s = 0.0;
  for (double v : x) {
    a += std::abs(v);
    s += std::sin(v * v);
  }
  const double ex = std::exp(-s);
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = ex * (sgn(x[i]) - a * 2.0 * x[i] * std::cos(x[i] * x[i]));
  }
}

BenchmarkFunction make(std::string name, std::string display, std::string formula,
                       std::function<BenchmarkFunction::Bounds(std::size_t)> box,
                       double (*value)(Span), void (*gradient)(Span, Grad),
                       std::function<double(std::size_t)> minimum,
                       std::function<std::optional<Point>(std::size_t)> argmin,
                       std::size_t min_dim = 1) {
  BenchmarkFunction f;
  f.name = std::move(name);
  f.display_name = std::move(display);
  f.formula = std::move(formula);
  f.min_dim = min_dim;
  f.box = std::move(box);
  f.value = value;
  f.gradient = gradient;
  f.minimum_value = std::move(minimum);
  f.minimizer = std::move(argmin);
  return f;
}

std::vector<BenchmarkFunction> build_catalog() {
  std::vector<BenchmarkFunction> c;
  c.push_back(make("ackley", "Ackley",
                   "-20 exp(-0.2 sqrt(sum x_i^2 / d)) - exp(sum cos(2 pi x_i) / d) + 20 + e",
                   fixed_box(-32.768, 32.768), ackley, ackley_grad, zero_min(), origin()));
  c.push_back(make("alpine", "Alpine", "sum |x_i sin(x_i) + 0.1 x_i|", fixed_box(-10.0, 10.0),
                   alpine, alpine_grad, zero_min(), origin()));
  c.push_back(make("chung", "Chung", "(sum x_i^2)^2", fixed_box(-100.0, 100.0), chung,
                   chung_grad, zero_min(), origin()));
  c.push_back(make("dixon", "Dixon", "(x_1 - 1)^2 + sum_{i=2}^d i (2 x_i^2 - x_{i-1})^2",
                   fixed_box(-10.0, 10.0), dixon, dixon_grad, zero_min(), dixon_argmin));
  c.push_back(make("exp", "Exp", "-exp(-0.5 sum x_i^2)", fixed_box(-1.0, 1.0), expo, expo_grad,
                   [](std::size_t) { return -1.0; }, origin()));
  c.push_back(make("griewank", "Griewank", "1 + sum x_i^2 / 4000 - prod cos(x_i / sqrt(i))",
                   fixed_box(-600.0, 600.0), griewank, griewank_grad, zero_min(), origin()));
  c.push_back(make("pathological", "Pathological",
                   "sum_{i=1}^{d-1} 0.5 + (sin^2(sqrt(100 x_i^2 + x_{i+1}^2)) - 0.5) / "
                   "(1 + 0.001 (x_i^2 - 2 x_i x_{i+1} + x_{i+1}^2)^2)",
                   fixed_box(-100.0, 100.0), pathological, pathological_grad, zero_min(),
                   origin(), 2));
  c.push_back(make("pinter", "Pinter",
                   "sum i x_i^2 + sum 20 i sin^2(x_{i-1} sin x_i + sin x_{i+1}) + "
                   "sum i log10(1 + i (x_{i-1}^2 - 2 x_i + 3 x_{i+1} - cos x_i + 1)^2), "
                   "x_0 = x_d, x_{d+1} = x_1",
                   fixed_box(-10.0, 10.0), pinter, pinter_grad, zero_min(), origin()));
  c.push_back(make("powell", "Powell", "sum |x_i|^(i+1)", fixed_box(-1.0, 1.0), powell,
                   powell_grad, zero_min(), origin()));
  c.push_back(make("qing", "Qing", "sum (x_i^2 - i)^2", fixed_box(-500.0, 500.0), qing, qing_grad,
                   zero_min(), [](std::size_t d) -> std::optional<Point> {
                     Point x(d);
                     for (std::size_t i = 0; i < d; ++i) x[i] = std::sqrt(w(i));
                     return x;
                   }));
  c.push_back(make("rastrigin", "Rastrigin", "10 d + sum (x_i^2 - 10 cos(2 pi x_i))",
                   fixed_box(-5.12, 5.12), rastrigin, rastrigin_grad, zero_min(), origin()));
  c.push_back(make("rosenbrock", "Rosenbrock",
                   "sum_{i=1}^{d-1} 100 (x_{i+1} - x_i^2)^2 + (x_i - 1)^2",
                   fixed_box(-2.048, 2.048), rosenbrock, rosenbrock_grad, zero_min(),
                   [](std::size_t d) -> std::optional<Point> { return Point(d, 1.0); }, 2));
  c.push_back(make("salomon", "Salomon", "1 - cos(2 pi ||x||) + 0.1 ||x||",
                   fixed_box(-100.0, 100.0), salomon, salomon_grad, zero_min(), origin()));
  c.push_back(make("schaffer", "Schaffer",
                   "sum_{i=1}^{d-1} 0.5 + (sin^2(sqrt(x_i^2 + x_{i+1}^2)) - 0.5) / "
                   "(1 + 0.001 (x_i^2 + x_{i+1}^2))^2",
                   fixed_box(-100.0, 100.0), schaffer, schaffer_grad, zero_min(), origin(), 2));
  c.push_back(make("sphere", "Sphere", "sum x_i^2", fixed_box(-5.12, 5.12), sphere, sphere_grad,
                   zero_min(), origin()));
  c.push_back(make("squares", "Squares", "sum i x_i^2", fixed_box(-10.0, 10.0), squares,
                   squares_grad, zero_min(), origin()));
  c.push_back(make(
      "trid", "Trid", "sum (x_i - 1)^2 - sum_{i=2}^d x_i x_{i-1}",
      [](std::size_t d) {
        const double b = static_cast<double>(d) * static_cast<double>(d);
        return BenchmarkFunction::Bounds{-b, b};
      },
      trid, trid_grad,
      [](std::size_t d) {
        const double n = static_cast<double>(d);
        return -n * (n + 4.0) * (n - 1.0) / 6.0;
      },
      [](std::size_t d) -> std::optional<Point> {
        Point x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = w(i) * (static_cast<double>(d) + 1.0 - w(i));
        return x;
      },
      2));
  c.push_back(make("trigonometric", "Trigonometric",
                   "sum_i (d - sum_j cos x_j + i (1 - cos x_i - sin x_i))^2",
                   fixed_box(0.0, pi), trigonometric, trigonometric_grad, zero_min(), origin()));
  c.push_back(make("wavy", "Wavy", "1 - (1/d) sum cos(10 x_i) exp(-x_i^2 / 2)",
                   fixed_box(-pi, pi), wavy, wavy_grad, zero_min(), origin()));
  c.push_back(make("yang", "Yang", "(sum |x_i|) exp(-sum sin(x_i^2))",
                   fixed_box(-2.0 * pi, 2.0 * pi), yang, yang_grad, zero_min(), origin()));
  return c;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::deque<BenchmarkFunction>& registry() {
  static std::deque<BenchmarkFunction> r;
  return r;
}

bool iequal(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

Objective BenchmarkFunction::objective(std::size_t d) const {
  if (d < min_dim) {
    throw std::invalid_argument(name + " needs dimension >= " + std::to_string(min_dim));
  }
  Objective obj;
  obj.dim = d;
  obj.value = [d, v = value, n = name](std::span<const double> x) {
    if (x.size() != d) throw std::invalid_argument(n + ": dimension mismatch");
    return v(x);
  };
  if (gradient) {
    obj.gradient = [d, gr = gradient, n = name](std::span<const double> x, std::span<double> g) {
      if (x.size() != d || g.size() != d) throw std::invalid_argument(n + ": dimension mismatch");
      gr(x, g);
    };
  }
  return obj;
}

SearchSpace BenchmarkFunction::search_space(std::size_t d, std::size_t nodes) const {
  const Bounds b = box(d);
  return SearchSpace::uniform(d, b.lower, b.upper, nodes);
}

double evaluate(const BenchmarkFunction& fn, std::span<const double> x) {
  if (x.size() < fn.min_dim || x.empty()) {
    throw std::invalid_argument(fn.name + ": dimension " + std::to_string(x.size()) +
                                " below minimum " + std::to_string(fn.min_dim));
  }
  return fn.value(x);
}

const std::vector<BenchmarkFunction>& catalog() {
  static const std::vector<BenchmarkFunction> c = build_catalog();
  return c;
}

void register_function(BenchmarkFunction fn) {
  if (fn.name.empty() || !fn.value || !fn.box || !fn.minimum_value) {
    throw std::invalid_argument("registered function needs a name, value, box and minimum");
  }
  if (fn.gradient) {
    throw std::invalid_argument("registered functions are value-only; gradients come from finite differences");
  }
  std::lock_guard lock(registry_mutex());
  for (const auto& f : catalog()) {
    if (iequal(f.name, fn.name)) throw std::invalid_argument("duplicate function " + fn.name);
  }
  for (const auto& f : registry()) {
    if (iequal(f.name, fn.name)) throw std::invalid_argument("duplicate function " + fn.name);
  }
  if (!fn.minimizer) fn.minimizer = [](std::size_t) -> std::optional<Point> { return {}; };
  if (fn.display_name.empty()) fn.display_name = fn.name;
  registry().push_back(std::move(fn));
}

std::vector<BenchmarkFunction> all_functions() {
  std::vector<BenchmarkFunction> out = catalog();
  std::lock_guard lock(registry_mutex());
  out.insert(out.end(), registry().begin(), registry().end());
  return out;
}

const BenchmarkFunction& find_function(std::string_view name) {
  for (const auto& f : catalog()) {
    if (iequal(f.name, name)) return f;
  }
  std::lock_guard lock(registry_mutex());
  for (const auto& f : registry()) {
    if (iequal(f.name, name)) return f;
  }
  throw std::invalid_argument("unknown benchmark function '" + std::string(name) + "'");
}

}  // namespace tesalocs
