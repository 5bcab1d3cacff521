#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

// Seeded randomness shared by the samplers. All variates are derived from
// raw mt19937_64 output with our own transforms so that a given seed yields
// the same stream on every standard library.
namespace trendscope {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
// Derives an independent stream seed for a named consumer (pipeline stage,
// search cell, restart) from a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view name);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

// Uniform in [0, 1).
double uniform01(Rng& rng);
// Uniform integer in [0, n).
std::size_t uniform_index(Rng& rng, std::size_t n);
double standard_normal(Rng& rng);
// log of a Gamma(shape, 1) draw; stable for shapes far below 1.
double log_gamma_variate(Rng& rng, double shape);
double gamma_variate(Rng& rng, double shape);
// Dirichlet draw, floored at 1e-100 per component and renormalized.
std::vector<double> dirichlet(Rng& rng, std::span<const double> concentration);
// Index drawn proportionally to non-negative weights that sum to `total`.
std::size_t sample_discrete(Rng& rng, std::span<const double> weights, double total);

}  // namespace trendscope
