#include "trendscope/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trendscope {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return splitmix64(root ^ splitmix64(h));
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(root ^ splitmix64(index + 0x5851F42D4C957F2DULL));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(Rng& rng, std::size_t n) {
  const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return std::min(i, n - 1);
}

double standard_normal(Rng& rng) {
  // Box-Muller; one of the pair is discarded to keep the stream stateless.
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// Marsaglia-Tsang for shape >= 1, returned in log space.
double log_gamma_ge1(Rng& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return std::log(d) + std::log(v);
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return std::log(d) + std::log(v);
  }
}

}  // namespace

double log_gamma_variate(Rng& rng, double shape) {
  if (shape >= 1.0) return log_gamma_ge1(rng, shape);
  // G(a) = G(a + 1) * U^(1/a)
  double u = uniform01(rng);
  while (u <= 0.0) u = uniform01(rng);
  return log_gamma_ge1(rng, shape + 1.0) + std::log(u) / shape;
}

double gamma_variate(Rng& rng, double shape) { return std::exp(log_gamma_variate(rng, shape)); }

std::vector<double> dirichlet(Rng& rng, std::span<const double> concentration) {
  std::vector<double> logs(concentration.size());
  for (std::size_t k = 0; k < logs.size(); ++k) logs[k] = log_gamma_variate(rng, concentration[k]);
  const double mx = *std::max_element(logs.begin(), logs.end());
  std::vector<double> w(logs.size());
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::exp(logs[k] - mx);
    total += w[k];
  }
  double renorm = 0.0;
  for (double& x : w) {
    x = std::max(x / total, 1e-100);
    renorm += x;
  }
  for (double& x : w) x /= renorm;
  return w;
}

std::size_t sample_discrete(Rng& rng, std::span<const double> weights, double total) {
  double u = uniform01(rng) * total;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    u -= weights[k];
    if (u < 0.0) return k;
  }
  // Rounding left a sliver of mass; return the last positive weight.
  for (std::size_t k = weights.size(); k-- > 0;) {
    if (weights[k] > 0.0) return k;
  }
  return weights.size() - 1;
}

}  // namespace trendscope
