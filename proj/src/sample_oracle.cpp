#include <cmath>
#include <numbers>
#include <vector>

#include "clf2d/errors.hpp"
#include "clf2d/verify.hpp"

namespace clf2d {
namespace {

struct Sampler {
  Mat2 a_p;
  double min_norm;
  double max_norm;
  SampleSummary summary;

  void add(Vec2 x) {
    const double r = norm(x);
    if (!(r > min_norm) || !(r <= max_norm)) return;
    const double y = quad_form(a_p, x);
    ++summary.samples;
    if (y > summary.worst_y) {
      summary.worst_y = y;
      summary.worst_x = x;
    }
  }

  void add_line(Vec2 d, Vec2 offset = {}) {
    for (int k = -30; k <= 30; ++k) {
      const double s = std::pow(10.0, 0.2 * k);
      add(offset + s * d);
      add(offset + (-s) * d);
    }
  }
};

Vec2 direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Directions where dᵀ N d = 0, from N11 cos² + 2 N12 cos sin + N22 sin²
// = m + h cos 2θ + k sin 2θ.
std::vector<double> null_directions(const Mat2& n) {
  const double m = 0.5 * (n.m11 + n.m22);
  const double h = 0.5 * (n.m11 - n.m22);
  const double k = 0.5 * (n.m12 + n.m21);
  const double r = std::hypot(h, k);
  std::vector<double> out;
  if (r == 0.0 || std::fabs(m) > r) return out;
  const double phi = std::atan2(k, h);
  const double spread = std::acos(-m / r);
  out.push_back(0.5 * (phi + spread));
  out.push_back(0.5 * (phi - spread));
  return out;
}

}  // namespace

SampleSummary sample_oracle(const BilinearSystem2D& sys, const Mat2& P, int n_samples,
                            double min_norm, double max_norm) {
  if (n_samples < 100) {
    throw Error(ErrorKind::kInvalidArgument, "sample_oracle needs at least 100 samples");
  }
  const LyapunovForms forms = build_Ap_Np(sys, P);
  const Mat2& n_p = forms.N_p;
  const Vec2 c = P * sys.b;
  Sampler sampler{forms.A_p, min_norm, max_norm, {}};

  const bool n_zero = max_abs(n_p) == 0.0;
  const bool c_zero = c.v1 == 0.0 && c.v2 == 0.0;
  if (n_zero && c_zero) {
    for (int i = 0; i < n_samples; ++i) {
      const Vec2 d = direction(std::numbers::pi * (i + 0.5) / n_samples);
      sampler.add_line(d);
    }
  } else if (n_zero) {
    sampler.add_line((1.0 / norm(c)) * (kJ * c));
  } else {
    auto along = [&](double theta) {
      const Vec2 d = direction(theta);
      const double alpha = quad_form(n_p, d);
      if (alpha == 0.0) return;
      sampler.add((-2.0 * dot(d, c) / alpha) * d);
    };
    for (int i = 0; i < n_samples; ++i) along(std::numbers::pi * (i + 0.5) / n_samples);

    // Refine where the second intersection runs off to infinity (asymptotic
    // directions) and where it collapses onto the origin (tangent at 0).
    std::vector<double> special = null_directions(n_p);
    if (!c_zero) special.push_back(std::atan2(c.v1, -c.v2));
    for (double theta : special) {
      for (int k = 1; k <= 12; ++k) {
        const double delta = std::pow(10.0, -0.5 * k);
        along(theta + delta);
        along(theta - delta);
      }
    }
    // Whole lines inside the conic: dᵀ N_p d = 0 and dᵀ c = 0.
    for (double theta : null_directions(n_p)) {
      const Vec2 d = direction(theta);
      if (std::fabs(dot(d, c)) <= 1e-12 * (norm(c) + max_abs(n_p))) sampler.add_line(d);
    }
  }
  sampler.summary.vacuous = sampler.summary.samples == 0;
  return sampler.summary;
}

}  // namespace clf2d
