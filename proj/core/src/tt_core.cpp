#include "tesalocs/tt_core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tesalocs/errors.hpp"
#include "tesalocs/random.hpp"

namespace tesalocs {

namespace {

// Divides v by its max entry and folds the factor into log_scale.
void normalize(ScaledVector& v) {
  double peak = 0.0;
  for (double x : v.values) peak = std::max(peak, x);
  if (peak == 0.0) {
    v.log_scale = -std::numeric_limits<double>::infinity();
    return;
  }
  for (double& x : v.values) x /= peak;
  v.log_scale += std::log(peak);
}

// row vector (len core.left) times core slice m -> row vector (len core.right)
std::vector<double> times_slice(std::span<const double> row, const TTCore& core, std::size_t m) {
  std::vector<double> out(core.right, 0.0);
  for (std::size_t a = 0; a < core.left; ++a) {
    const double va = row[a];
    if (va == 0.0) continue;
    const double* g = &core.data[(a * core.modes + m) * core.right];
    for (std::size_t b = 0; b < core.right; ++b) out[b] += va * g[b];
  }
  return out;
}

void check_index(const TTDistribution& t, std::span<const std::size_t> idx) {
  if (idx.size() != t.order()) {
    throw std::out_of_range("multi-index length " + std::to_string(idx.size()) +
                            " does not match tensor order " + std::to_string(t.order()));
  }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= t.core(i).modes) {
      throw std::out_of_range("index component " + std::to_string(i) + " = " +
                              std::to_string(idx[i]) + " out of range");
    }
  }
}

}  // namespace

TTDistribution::TTDistribution(std::vector<TTCore> cores) : cores_(std::move(cores)) {
  if (cores_.empty()) throw std::invalid_argument("TT needs at least one core");
  if (cores_.front().left != 1 || cores_.back().right != 1) {
    throw std::invalid_argument("boundary TT-ranks must be 1");
  }
  for (std::size_t i = 0; i < cores_.size(); ++i) {
    const TTCore& c = cores_[i];
    if (c.left == 0 || c.modes == 0 || c.right == 0) {
      throw std::invalid_argument("core " + std::to_string(i) + " has a zero dimension");
    }
    if (c.data.size() != c.left * c.modes * c.right) {
      throw std::invalid_argument("core " + std::to_string(i) + " data size mismatch");
    }
    if (i + 1 < cores_.size() && c.right != cores_[i + 1].left) {
      throw std::invalid_argument("rank mismatch between cores " + std::to_string(i) +
                                  " and " + std::to_string(i + 1));
    }
    for (double x : c.data) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("core " + std::to_string(i) +
                                    " has a negative or non-finite entry");
      }
    }
  }
}

std::vector<std::size_t> TTDistribution::dims() const {
  std::vector<std::size_t> out;
  out.reserve(cores_.size());
  for (const auto& c : cores_) out.push_back(c.modes);
  return out;
}

std::vector<std::size_t> TTDistribution::ranks() const {
  std::vector<std::size_t> out;
  out.reserve(cores_.size() + 1);
  out.push_back(1);
  for (const auto& c : cores_) out.push_back(c.right);
  return out;
}

std::size_t TTDistribution::parameter_count() const {
  std::size_t n = 0;
  for (const auto& c : cores_) n += c.data.size();
  return n;
}

TTDistribution init_random(std::size_t d, std::size_t n, std::size_t r, std::uint64_t seed) {
  const std::vector<std::size_t> dims(d, n);
  return init_random(dims, r, seed);
}

TTDistribution init_random(std::span<const std::size_t> dims, std::size_t r, std::uint64_t seed) {
  const std::size_t d = dims.size();
  if (d == 0 || r == 0 || std::find(dims.begin(), dims.end(), 0) != dims.end()) {
    throw std::invalid_argument("init_random: d, n and r must be positive");
  }
  Rng rng(seed);
  std::vector<TTCore> cores;
  cores.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    TTCore c(i == 0 ? 1 : r, dims[i], i + 1 == d ? 1 : r);
    for (double& x : c.data) x = uniform_open_closed(rng);
    cores.push_back(std::move(c));
  }
  return TTDistribution(std::move(cores));
}

double eval(const TTDistribution& t, std::span<const std::size_t> idx) {
  check_index(t, idx);
  std::vector<double> row{1.0};
  for (std::size_t i = 0; i < t.order(); ++i) row = times_slice(row, t.core(i), idx[i]);
  return row[0];
}

double log_eval(const TTDistribution& t, std::span<const std::size_t> idx) {
  check_index(t, idx);
  ScaledVector row{{1.0}, 0.0};
  for (std::size_t i = 0; i < t.order(); ++i) {
    row.values = times_slice(row.values, t.core(i), idx[i]);
    normalize(row);
    if (std::isinf(row.log_scale)) return row.log_scale;
  }
  return row.log_scale + std::log(row.values[0]);
}

std::vector<double> mode_sum(const TTCore& core) {
  std::vector<double> out(core.left * core.right, 0.0);
  for (std::size_t a = 0; a < core.left; ++a) {
    for (std::size_t m = 0; m < core.modes; ++m) {
      const double* g = &core.data[(a * core.modes + m) * core.right];
      for (std::size_t b = 0; b < core.right; ++b) out[a * core.right + b] += g[b];
    }
  }
  return out;
}

std::vector<std::vector<double>> suffix_interfaces(const TTDistribution& t) {
  const std::size_t d = t.order();
  std::vector<std::vector<double>> s(d + 1);
  s[d] = {1.0};
  for (std::size_t i = d; i-- > 0;) {
    const TTCore& c = t.core(i);
    auto sum = mode_sum(c);
    s[i].assign(c.left, 0.0);
    for (std::size_t a = 0; a < c.left; ++a) {
      for (std::size_t b = 0; b < c.right; ++b) s[i][a] += sum[a * c.right + b] * s[i + 1][b];
    }
  }
  return s;
}

std::vector<ScaledVector> scaled_suffix_interfaces(const TTDistribution& t) {
  const std::size_t d = t.order();
  std::vector<ScaledVector> s(d + 1);
  s[d] = {{1.0}, 0.0};
  for (std::size_t i = d; i-- > 0;) {
    const TTCore& c = t.core(i);
    auto sum = mode_sum(c);
    s[i].values.assign(c.left, 0.0);
    s[i].log_scale = s[i + 1].log_scale;
    for (std::size_t a = 0; a < c.left; ++a) {
      for (std::size_t b = 0; b < c.right; ++b) {
        s[i].values[a] += sum[a * c.right + b] * s[i + 1].values[b];
      }
    }
    normalize(s[i]);
  }
  return s;
}

std::vector<ScaledVector> scaled_prefix_interfaces(const TTDistribution& t) {
  const std::size_t d = t.order();
  std::vector<ScaledVector> p(d + 1);
  p[0] = {{1.0}, 0.0};
  for (std::size_t i = 0; i < d; ++i) {
    const TTCore& c = t.core(i);
    auto sum = mode_sum(c);
    p[i + 1].values.assign(c.right, 0.0);
    p[i + 1].log_scale = p[i].log_scale;
    for (std::size_t a = 0; a < c.left; ++a) {
      for (std::size_t b = 0; b < c.right; ++b) {
        p[i + 1].values[b] += p[i].values[a] * sum[a * c.right + b];
      }
    }
    normalize(p[i + 1]);
  }
  return p;
}

double mass(const TTDistribution& t) {
  const double z = suffix_interfaces(t)[0][0];
  if (z == 0.0) throw DegenerateModelError("TT mass underflowed to zero");
  return z;
}

double log_mass(const TTDistribution& t) {
  const auto s = scaled_suffix_interfaces(t);
  const double z = s[0].log_scale + std::log(s[0].values[0]);
  if (std::isinf(z) && z < 0) throw DegenerateModelError("TT mass is zero");
  return z;
}

std::string serialize_checkpoint(const TTDistribution& t) {
  nlohmann::json j;
  j["format"] = "tesalocs-tt";
  j["version"] = 1;
  auto& cores = j["cores"] = nlohmann::json::array();
  for (const auto& c : t.cores()) {
    cores.push_back({{"shape", {c.left, c.modes, c.right}}, {"values", c.data}});
  }
  return j.dump();
}

TTDistribution parse_checkpoint(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", std::string{}) != "tesalocs-tt" || j.value("version", 0) != 1) {
    throw std::invalid_argument("not a tesalocs-tt v1 checkpoint");
  }
  std::vector<TTCore> cores;
  for (const auto& jc : j.at("cores")) {
    const auto shape = jc.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 3) throw std::invalid_argument("core shape must have 3 entries");
    TTCore c(shape[0], shape[1], shape[2]);
    c.data = jc.at("values").get<std::vector<double>>();
    cores.push_back(std::move(c));
  }
  return TTDistribution(std::move(cores));
}

void save_checkpoint(const TTDistribution& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << serialize_checkpoint(t) << '\n';
}

TTDistribution load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace tesalocs
