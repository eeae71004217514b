#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdimlab {

// Budget / resource exhaustion (maps to CLI exit code 3).
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration or schema violation (maps to CLI exit code 2).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Ordinary least squares y = intercept + slope * x. Requires >= 2 points;
// with a single point returns slope 0, intercept y0.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// -sum p log p in nats, with the 0 log 0 = 0 convention. Negative inputs are
// rejected; masses need not be normalized (caller's responsibility).
double shannon_entropy(std::span<const double> masses);

// Binary entropy in nats.
double binary_entropy(double t);

uint64_t splitmix64(uint64_t x);

// Counter-based deterministic RNG: uniform(i) depends only on (seed, stream,
// i), so parallel consumers with distinct streams stay reproducible.
struct CounterRng {
  uint64_t seed = 0;
  uint64_t stream = 0;
  double uniform(uint64_t index) const;  // in [0, 1)
};

// Fixed-format floating point for CSV/JSON artifacts (deterministic output).
std::string format_double(double v);

}  // namespace mdimlab
