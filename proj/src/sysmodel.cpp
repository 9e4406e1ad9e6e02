#include "clf2d/sysmodel.hpp"

#include <algorithm>
#include <cmath>

#include "clf2d/errors.hpp"

namespace clf2d {

bool BilinearSystem2D::finite() const {
  for (double v : {A.m11, A.m12, A.m21, A.m22, N.m11, N.m12, N.m21, N.m22, b.v1, b.v2}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool is_controllable(const BilinearSystem2D& sys, double tol) {
  const double det = Mat2::from_columns(sys.b, sys.A * sys.b).det();
  const double scale = std::max({max_abs(sys.A), max_abs(sys.b), 1.0});
  return std::fabs(det) > tol * scale;
}

NormalFormSystem to_controller_normal_form(const BilinearSystem2D& sys, double tol) {
  if (!is_controllable(sys, tol)) {
    throw Error(ErrorKind::kNotControllable, "pair (A, b) is not controllable");
  }
  const CharCoeffs cc = char_coeffs(sys.A);
  // Controllability matrices of the original and of the companion pair;
  // T maps the latter onto the former.
  const Mat2 ctrb = Mat2::from_columns(sys.b, sys.A * sys.b);
  const Mat2 ctrb_companion{0.0, 1.0, 1.0, -cc.a1};
  NormalFormSystem nf;
  nf.a0 = cc.a0;
  nf.a1 = cc.a1;
  nf.T = ctrb * inverse(ctrb_companion);
  nf.T_inv = ctrb_companion * inverse(ctrb);
  nf.system.A = {0.0, 1.0, -cc.a0, -cc.a1};
  nf.system.b = {0.0, 1.0};
  nf.system.N = nf.T_inv * sys.N * nf.T;
  return nf;
}

Mat2 lyapunov_matrix_to_original(const NormalFormSystem& nf, const Mat2& p_normal) {
  return nf.T_inv.transpose() * p_normal * nf.T_inv;
}

Mat2 lyapunov_matrix_to_normal(const NormalFormSystem& nf, const Mat2& p_original) {
  return nf.T.transpose() * p_original * nf.T;
}

}  // namespace clf2d
