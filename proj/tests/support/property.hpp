#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "nlsg/space.hpp"

namespace nlsg::testing {

/// Seeded draws for property tests. Every case gets its own stream so a
/// failing case can be replayed from (seed, index) alone.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  /// Gaussian direction, sometimes sparse, with log-uniform length.
  Vector vector(int dim, double lo = 1e-3, double hi = 1e3) {
    Vector v(dim);
    do {
      std::normal_distribution<double> g;
      for (int i = 0; i < dim; ++i) v[i] = g(rng_);
      if (coin(0.25)) {
        for (int i = 0; i < dim; ++i) {
          if (coin()) v[i] = 0.0;
        }
      }
    } while (v.isZero());
    return log_uniform(lo, hi) * v / v.norm();
  }

  Vector unit(const Space& s) {
    const Vector v = vector(s.dimension(), 1.0, 1.0);
    return v / s.norm(v);
  }

  Space space(int max_dim = 5) {
    const int d = integer(1, max_dim);
    switch (integer(0, 3)) {
      case 0: return Space::euclidean(d);
      case 1: return Space::lp(d, 3.0);
      case 2: return Space::lp(d, 1.5);
      default: return Space::lp(d, 2.0);
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::string describe(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ']';
  return os.str();
}

/// Runs `body(gen)` for `cases` independent seeds; the trace names the case.
template <class Body>
void for_all(std::uint64_t seed, int cases, Body&& body) {
  for (int i = 0; i < cases; ++i) {
    const std::uint64_t case_seed = seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i);
    SCOPED_TRACE("property case " + std::to_string(i) + " seed " + std::to_string(case_seed));
    Gen g(case_seed);
    body(g);
    if (::testing::Test::HasFatalFailure() || ::testing::Test::HasNonfatalFailure()) return;
  }
}

}  // namespace nlsg::testing
