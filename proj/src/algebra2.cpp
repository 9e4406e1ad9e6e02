#include "clf2d/algebra2.hpp"

#include <cmath>
#include <string>

#include "clf2d/errors.hpp"

namespace clf2d {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotSymmetric: return "NotSymmetric";
    case ErrorKind::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::kNotADoubleRoot: return "NotADoubleRoot";
    case ErrorKind::kNotControllable: return "NotControllable";
    case ErrorKind::kNonPositiveP1: return "NonPositiveP1";
    case ErrorKind::kDiverged: return "Diverged";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Mat2 inverse(const Mat2& a) {
  const double d = a.det();
  if (d == 0.0 || !std::isfinite(d)) {
    throw Error(ErrorKind::kInvalidArgument, "matrix is singular");
  }
  return (1.0 / d) * Mat2{a.m22, -a.m12, -a.m21, a.m11};
}

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::kPositiveDefinite: return "PositiveDefinite";
    case Definiteness::kNegativeDefinite: return "NegativeDefinite";
    case Definiteness::kPositiveSemidefinite: return "PositiveSemidefinite";
    case Definiteness::kNegativeSemidefinite: return "NegativeSemidefinite";
    case Definiteness::kIndefinite: return "Indefinite";
    case Definiteness::kZero: return "Zero";
  }
  return "Unknown";
}

SymmetricEigen symmetric_eigen(const Mat2& s) {
  const double a = s.m11;
  const double b = 0.5 * (s.m12 + s.m21);
  const double d = s.m22;
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double radius = std::hypot(half_diff, b);

  SymmetricEigen out;
  double big = mean + radius;
  double small = mean - radius;
  // The eigenvalue of smaller magnitude suffers cancellation; recover it
  // from the determinant instead.
  const double det = a * d - b * b;
  if (std::fabs(big) >= std::fabs(small)) {
    if (big != 0.0) small = det / big;
  } else {
    if (small != 0.0) big = det / small;
  }
  out.larger = big;
  out.smaller = small;

  Vec2 v{1.0, 0.0};
  if (radius > 0.0) {
    v = half_diff >= 0.0 ? Vec2{half_diff + radius, b} : Vec2{b, radius - half_diff};
    v = (1.0 / norm(v)) * v;
  }
  const bool flip = std::fabs(v.v1) >= std::fabs(v.v2) ? v.v1 < 0.0 : v.v2 < 0.0;
  out.larger_vector = flip ? -v : v;
  return out;
}

Definiteness classify_definiteness(const Mat2& s, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "definiteness tolerance must be positive");
  }
  const double scale = max_abs(s);
  if (scale == 0.0) return Definiteness::kZero;
  if (std::fabs(s.m12 - s.m21) > tol * scale) {
    throw Error(ErrorKind::kNotSymmetric, "matrix is not symmetric");
  }
  const SymmetricEigen eig = symmetric_eigen(s);
  const double zero = tol * scale;
  auto sign = [zero](double lambda) { return lambda > zero ? 1 : (lambda < -zero ? -1 : 0); };
  const int hi = sign(eig.larger);
  const int lo = sign(eig.smaller);
  if (hi > 0 && lo > 0) return Definiteness::kPositiveDefinite;
  if (hi < 0 && lo < 0) return Definiteness::kNegativeDefinite;
  if (hi > 0 && lo < 0) return Definiteness::kIndefinite;
  if (hi > 0 || lo > 0) return Definiteness::kPositiveSemidefinite;
  if (hi < 0 || lo < 0) return Definiteness::kNegativeSemidefinite;
  return Definiteness::kZero;
}

Mat2 cholesky_upper(const Mat2& s, double tol) {
  if (classify_definiteness(s, tol) != Definiteness::kPositiveDefinite) {
    throw Error(ErrorKind::kNotPositiveDefinite, "matrix is not positive definite");
  }
  const double l1 = std::sqrt(s.m11);
  const double l2 = 0.5 * (s.m12 + s.m21) / l1;
  const double rest = s.m22 - l2 * l2;
  if (!(rest > 0.0)) {
    throw Error(ErrorKind::kNotPositiveDefinite, "matrix is not positive definite");
  }
  return {l1, l2, 0.0, std::sqrt(rest)};
}

}  // namespace clf2d
