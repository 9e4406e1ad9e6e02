#include "clf2d/control.hpp"

#include <cmath>
#include <string>
#include <type_traits>
#include <utility>

#include "clf2d/errors.hpp"

namespace clf2d {
namespace {

constexpr double kBetaZero = 1e-12;

// (N x + b)ᵀ P x and the magnitude of its terms.
std::pair<double, double> input_gain(const BilinearSystem2D& sys, const Mat2& P, Vec2 x) {
  const Vec2 g = sys.N * x + sys.b;
  const Vec2 px = P * x;
  const double mag = std::fabs(g.v1 * px.v1) + std::fabs(g.v2 * px.v2);
  return {dot(g, px), mag};
}

}  // namespace

double gutman_u(const BilinearSystem2D& sys, const Mat2& P, double alpha, Vec2 x) {
  return -alpha * input_gain(sys, P, x).first;
}

double sontag_u(const BilinearSystem2D& sys, const Mat2& P, Vec2 x) {
  const auto [gain, mag] = input_gain(sys, P, x);
  const double beta = 2.0 * gain;
  if (std::fabs(beta) <= kBetaZero * 2.0 * mag) return 0.0;
  const double a = quad_form(lyapunov_form(sys.A, P), x);
  const double b2 = beta * beta;
  return -(a + std::sqrt(a * a + b2 * b2)) / beta;
}

void ControlLaw::validate() const {
  if (const auto* g = std::get_if<GutmanLaw>(&kind); g && !(g->alpha > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "Gutman gain alpha must be positive");
  }
  if (std::holds_alternative<SontagLaw>(kind) &&
      classify_definiteness(P) != Definiteness::kPositiveDefinite) {
    throw Error(ErrorKind::kInvalidArgument, "Sontag law requires a positive definite P");
  }
}

double ControlLaw::operator()(const BilinearSystem2D& sys, Vec2 x) const {
  return std::visit(
      [&](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, GutmanLaw>) {
          return gutman_u(sys, P, law.alpha, x);
        } else if constexpr (std::is_same_v<T, SontagLaw>) {
          return sontag_u(sys, P, x);
        } else {
          return law.u;
        }
      },
      kind);
}

Vec2 closed_loop_rhs(const BilinearSystem2D& sys, const ControlLaw& law, Vec2 x) {
  const double u = law(sys, x);
  return sys.A * x + u * (sys.N * x + sys.b);
}

std::size_t sample_count(double dt, double final_time) {
  // Guard against T/dt landing a hair below an integer.
  return static_cast<std::size_t>(std::floor(final_time / dt * (1.0 + 1e-12))) + 1;
}

Trajectory simulate(const BilinearSystem2D& sys, const ControlLaw& law, Vec2 x0, double dt,
                    double final_time, const std::optional<Mat2>& v_matrix) {
  if (!(dt > 0.0) || !(final_time >= dt)) {
    throw Error(ErrorKind::kInvalidArgument, "simulation needs dt > 0 and T >= dt");
  }
  law.validate();
  const Mat2 vm = v_matrix.value_or(law.P);
  const std::size_t n = sample_count(dt, final_time);

  Trajectory traj;
  traj.dt = dt;
  traj.final_time = final_time;
  traj.samples.reserve(n);
  Vec2 x = x0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(norm(x) <= kDivergenceNorm)) {
      throw Error(ErrorKind::kDiverged, "trajectory diverged at t=" +
                                            std::to_string(static_cast<double>(k) * dt));
    }
    traj.samples.push_back({static_cast<double>(k) * dt, x, law(sys, x), quad_form(vm, x)});
    if (k + 1 == n) break;
    const Vec2 k1 = closed_loop_rhs(sys, law, x);
    const Vec2 k2 = closed_loop_rhs(sys, law, x + (0.5 * dt) * k1);
    const Vec2 k3 = closed_loop_rhs(sys, law, x + (0.5 * dt) * k2);
    const Vec2 k4 = closed_loop_rhs(sys, law, x + dt * k3);
    x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return traj;
}

MonotoneCheck lyapunov_monotone(const Trajectory& traj, const Mat2& P, double ball) {
  if (!(ball > 0.0)) throw Error(ErrorKind::kInvalidArgument, "ball radius must be positive");
  MonotoneCheck out;
  for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
    const Vec2 x = traj.samples[k].x;
    if (norm(x) <= ball) continue;
    if (!(quad_form(P, traj.samples[k + 1].x) < quad_form(P, x))) {
      out.monotone = false;
      out.first_violation = k;
      return out;
    }
  }
  return out;
}

}  // namespace clf2d
