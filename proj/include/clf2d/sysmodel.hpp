#pragma once

#include "clf2d/algebra2.hpp"

namespace clf2d {

/// ẋ = A x + (N x + b) u with scalar input u.
struct BilinearSystem2D {
  Mat2 A;
  Mat2 N;
  Vec2 b;

  bool finite() const;
};

/// Controller normal form of a controllable system. The original state x and
/// the normal-form state z are related by x = T z, so
/// system = (T⁻¹ A T, T⁻¹ N T, T⁻¹ b) with system.A = [[0, 1], [-a0, -a1]]
/// and system.b = (0, 1).
struct NormalFormSystem {
  BilinearSystem2D system;
  double a0 = 0.0;
  double a1 = 0.0;
  Mat2 T = Mat2::identity();
  Mat2 T_inv = Mat2::identity();
};

/// Coefficients of s² + a1 s + a0, the characteristic polynomial of A.
struct CharCoeffs {
  double a0 = 0.0;
  double a1 = 0.0;
};

// Adding 0.0 turns a signed zero into +0.
constexpr CharCoeffs char_coeffs(const Mat2& a) { return {a.det() + 0.0, -a.trace() + 0.0}; }

/// Hurwitz test for s² + a1 s + a0.
constexpr bool is_asymptotically_stable(double a0, double a1) { return a0 > 0.0 && a1 > 0.0; }

inline constexpr double kDefaultControllabilityTol = 1e-9;

/// |det [b, A b]| > tol * max(max|A|, max|b|, 1).
bool is_controllable(const BilinearSystem2D& sys, double tol = kDefaultControllabilityTol);

/// Throws Error(kNotControllable).
NormalFormSystem to_controller_normal_form(const BilinearSystem2D& sys,
                                           double tol = kDefaultControllabilityTol);

/// V = zᵀ P z in normal-form coordinates equals xᵀ (T⁻ᵀ P T⁻¹) x.
Mat2 lyapunov_matrix_to_original(const NormalFormSystem& nf, const Mat2& p_normal);

/// Inverse of lyapunov_matrix_to_original: Tᵀ P T.
Mat2 lyapunov_matrix_to_normal(const NormalFormSystem& nf, const Mat2& p_original);

}  // namespace clf2d
