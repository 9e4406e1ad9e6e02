#pragma once

// Feedback laws built from V = xᵀ P x and fixed-step closed-loop simulation.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "clf2d/algebra2.hpp"
#include "clf2d/sysmodel.hpp"

namespace clf2d {

/// u = -alpha (N x + b)ᵀ P x
double gutman_u(const BilinearSystem2D& sys, const Mat2& P, double alpha, Vec2 x);

/// Universal formula with a(x) = xᵀ A_p x and beta(x) = 2 (N x + b)ᵀ P x:
/// u = -(a + sqrt(a² + beta⁴)) / beta, and u = 0 where beta vanishes.
double sontag_u(const BilinearSystem2D& sys, const Mat2& P, Vec2 x);

struct GutmanLaw {
  double alpha = 0.1;
};
struct SontagLaw {};
struct OpenLoop {
  double u = 0.0;
};

struct ControlLaw {
  std::variant<GutmanLaw, SontagLaw, OpenLoop> kind;
  Mat2 P = Mat2::identity();

  /// Throws Error(kInvalidArgument) if alpha <= 0 or P is not positive
  /// definite where the law needs it.
  void validate() const;
  double operator()(const BilinearSystem2D& sys, Vec2 x) const;
};

/// A x + (N x + b) u(x)
Vec2 closed_loop_rhs(const BilinearSystem2D& sys, const ControlLaw& law, Vec2 x);

struct TrajectorySample {
  double t = 0.0;
  Vec2 x;
  double u = 0.0;
  double V = 0.0;
};

struct Trajectory {
  double dt = 0.0;
  double final_time = 0.0;
  std::vector<TrajectorySample> samples;
};

/// Sample count used by simulate: floor(T/dt) + 1.
std::size_t sample_count(double dt, double final_time);

inline constexpr double kDivergenceNorm = 1e9;

/// Classical RK4 with fixed step. V is evaluated with `v_matrix` (law.P
/// if unset). Throws Error(kDiverged) once |x| exceeds 1e9 or turns NaN.
Trajectory simulate(const BilinearSystem2D& sys, const ControlLaw& law, Vec2 x0, double dt,
                    double final_time, const std::optional<Mat2>& v_matrix = std::nullopt);

struct MonotoneCheck {
  bool monotone = true;
  std::optional<std::size_t> first_violation;
};

/// V(x_{k+1}) < V(x_k) for every k with |x_k| > ball.
MonotoneCheck lyapunov_monotone(const Trajectory& traj, const Mat2& P, double ball);

}  // namespace clf2d
