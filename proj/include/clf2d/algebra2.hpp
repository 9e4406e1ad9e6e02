#pragma once

// Small fixed-size linear algebra for planar systems.

#include <cmath>
#include <string_view>

namespace clf2d {

struct Vec2 {
  double v1 = 0.0;
  double v2 = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.v1 + b.v1, a.v2 + b.v2}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.v1 - b.v1, a.v2 - b.v2}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.v1, -a.v2}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.v1, s * a.v2}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.v1 * b.v1 + a.v2 * b.v2; }
inline double norm(Vec2 a) { return std::hypot(a.v1, a.v2); }
inline double max_abs(Vec2 a) { return std::fmax(std::fabs(a.v1), std::fabs(a.v2)); }

// Row-major 2x2 matrix [[m11, m12], [m21, m22]].
struct Mat2 {
  double m11 = 0.0;
  double m12 = 0.0;
  double m21 = 0.0;
  double m22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 from_columns(Vec2 c1, Vec2 c2) { return {c1.v1, c2.v1, c1.v2, c2.v2}; }

  constexpr Vec2 col1() const { return {m11, m21}; }
  constexpr Vec2 col2() const { return {m12, m22}; }

  constexpr Mat2 transpose() const { return {m11, m21, m12, m22}; }
  constexpr double det() const { return m11 * m22 - m12 * m21; }
  constexpr double trace() const { return m11 + m22; }

  friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
  }
  friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
  }
  friend constexpr Mat2 operator-(const Mat2& a) { return {-a.m11, -a.m12, -a.m21, -a.m22}; }
  friend constexpr Mat2 operator*(double s, const Mat2& a) {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
  }
  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
  friend constexpr Vec2 operator*(const Mat2& a, Vec2 x) {
    return {a.m11 * x.v1 + a.m12 * x.v2, a.m21 * x.v1 + a.m22 * x.v2};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

// Rotation by +90 degrees.
inline constexpr Mat2 kJ{0.0, -1.0, 1.0, 0.0};

inline double max_abs(const Mat2& a) {
  return std::fmax(std::fmax(std::fabs(a.m11), std::fabs(a.m12)),
                   std::fmax(std::fabs(a.m21), std::fabs(a.m22)));
}

/// xᵀ S x.
constexpr double quad_form(const Mat2& s, Vec2 x) { return dot(x, s * x); }

/// Σ |s_ij x_i x_j|, the magnitude against which roundoff in quad_form is judged.
inline double quad_form_magnitude(const Mat2& s, Vec2 x) {
  const double a1 = std::fabs(x.v1);
  const double a2 = std::fabs(x.v2);
  return std::fabs(s.m11) * a1 * a1 + (std::fabs(s.m12) + std::fabs(s.m21)) * a1 * a2 +
         std::fabs(s.m22) * a2 * a2;
}

/// Throws Error(kInvalidArgument) when |det| is zero.
Mat2 inverse(const Mat2& a);

/// Aᵀ S + S A.
constexpr Mat2 lyapunov_form(const Mat2& a, const Mat2& s) {
  return a.transpose() * s + s * a;
}

enum class Definiteness {
  kPositiveDefinite,
  kNegativeDefinite,
  kPositiveSemidefinite,
  kNegativeSemidefinite,
  kIndefinite,
  kZero,
};

std::string_view to_string(Definiteness d);

inline constexpr double kDefaultDefinitenessTol = 1e-9;

/// Eigen-decomposition of a symmetric 2x2 matrix. `larger` >= `smaller`;
/// `larger_vector` is a unit eigenvector for `larger` whose largest-magnitude
/// component is positive. The eigenvector for `smaller` is kJ * larger_vector.
struct SymmetricEigen {
  double larger = 0.0;
  double smaller = 0.0;
  Vec2 larger_vector{1.0, 0.0};
};

/// Uses the mean of the off-diagonal entries.
SymmetricEigen symmetric_eigen(const Mat2& s);

/// Eigenvalues with |λ| <= tol * max|s_ij| count as zero. Throws
/// Error(kNotSymmetric) if |m12 - m21| > tol * max|s_ij|.
Definiteness classify_definiteness(const Mat2& s, double tol = kDefaultDefinitenessTol);

/// Upper-triangular L = [[l1, l2], [0, l3]] with l1, l3 > 0 and LᵀL = s.
/// Throws Error(kNotPositiveDefinite).
Mat2 cholesky_upper(const Mat2& s, double tol = kDefaultDefinitenessTol);

}  // namespace clf2d
