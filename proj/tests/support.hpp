#pragma once

// Hand-rolled generators shared by the property tests and the acceptance run.

#include <random>

#include "clf2d/algebra2.hpp"
#include "clf2d/sysmodel.hpp"

namespace clf2d::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Vec2 vec(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }
  Mat2 mat(double lo, double hi) {
    return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
  }

  // Entries uniform in [lo, hi], rejected until positive definite.
  Mat2 spd(double lo, double hi) {
    for (;;) {
      const double p11 = uniform(lo, hi);
      const double p12 = uniform(lo, hi);
      const double p22 = uniform(lo, hi);
      if (p11 > 0.0 && p11 * p22 - p12 * p12 > 1e-6 * (p11 * p11 + p22 * p22)) {
        return {p11, p12, p12, p22};
      }
    }
  }

  BilinearSystem2D system(double lo, double hi) { return {mat(lo, hi), mat(lo, hi), vec(lo, hi)}; }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline BilinearSystem2D normal_form_system(double a0, double a1, const Mat2& N) {
  return {{0.0, 1.0, -a0, -a1}, N, {0.0, 1.0}};
}

}  // namespace clf2d::testing
