#include <gtest/gtest.h>

#include <cmath>

#include "clf2d/control.hpp"
#include "clf2d/errors.hpp"
#include "clf2d/sysmodel.hpp"
#include "support.hpp"

namespace clf2d {
namespace {

const BilinearSystem2D kExample{{0, 1, 0, -1}, {1, 1, -1, 1}, {0, 1}};

BilinearSystem2D conjugate(const BilinearSystem2D& sys, const Mat2& T) {
  // New coordinates w with z = T w: A' = T⁻¹AT, N' = T⁻¹NT, b' = T⁻¹b.
  const Mat2 ti = inverse(T);
  return {ti * sys.A * T, ti * sys.N * T, ti * sys.b};
}

TEST(Controllability, Examples) {
  EXPECT_TRUE(is_controllable(kExample));
  EXPECT_FALSE(is_controllable({Mat2::identity(), {}, {1, 1}}));
  EXPECT_TRUE(is_controllable({{0, 1, 0, 0}, {}, {0, 1}}));
  EXPECT_FALSE(is_controllable({{0, 1, 0, 0}, {}, {0, 0}}));
}

TEST(CharCoeffs, Examples) {
  EXPECT_EQ(char_coeffs(Mat2{0, 1, 0, -1}).a0, 0.0);
  EXPECT_EQ(char_coeffs(Mat2{0, 1, 0, -1}).a1, 1.0);
  EXPECT_EQ(char_coeffs(-1.0 * Mat2::identity()).a0, 1.0);
  EXPECT_EQ(char_coeffs(-1.0 * Mat2::identity()).a1, 2.0);
  EXPECT_EQ(char_coeffs(Mat2{0, 1, -1, -2}).a0, 1.0);
  EXPECT_EQ(char_coeffs(Mat2{0, 1, -1, -2}).a1, 2.0);
}

TEST(Stability, Examples) {
  EXPECT_FALSE(is_asymptotically_stable(0, 1));
  EXPECT_TRUE(is_asymptotically_stable(1, 2));
  EXPECT_FALSE(is_asymptotically_stable(-1, 1));
}

TEST(NormalForm, ExampleIsAlreadyNormal) {
  const NormalFormSystem nf = to_controller_normal_form(kExample);
  EXPECT_EQ(nf.T, Mat2::identity());
  EXPECT_EQ(nf.a0, 0.0);
  EXPECT_EQ(nf.a1, 1.0);
  EXPECT_EQ(nf.system.N, kExample.N);
}

TEST(NormalForm, ConjugatedExampleRoundTrips) {
  const BilinearSystem2D moved = conjugate(kExample, Mat2{2, 1, 0, 1});
  const NormalFormSystem nf = to_controller_normal_form(moved);
  EXPECT_LE(max_abs(nf.system.A - kExample.A), 1e-12);
  EXPECT_LE(max_abs(nf.system.N - kExample.N), 1e-12);
  EXPECT_LE(max_abs(nf.system.b - kExample.b), 1e-12);
  EXPECT_LE(max_abs(nf.T * nf.T_inv - Mat2::identity()), 1e-12);
}

TEST(NormalForm, RejectsUncontrollable) {
  try {
    to_controller_normal_form({Mat2::identity(), {}, {1, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotControllable);
  }
}

TEST(NormalForm, InvariantsOnRandomSystems) {
  testing::Gen gen(21);
  int done = 0;
  while (done < 1000) {
    const BilinearSystem2D sys = gen.system(-3, 3);
    const Mat2 ctrb = Mat2::from_columns(sys.b, sys.A * sys.b);
    if (std::fabs(ctrb.det()) < 1e-2) continue;
    ++done;
    const NormalFormSystem nf = to_controller_normal_form(sys);
    const CharCoeffs cc = char_coeffs(sys.A);
    EXPECT_EQ(nf.system.A, (Mat2{0, 1, -nf.a0, -nf.a1}));
    EXPECT_EQ(nf.system.b, (Vec2{0, 1}));
    EXPECT_NEAR(nf.a0, cc.a0, 1e-12 * (1 + std::fabs(cc.a0)));
    EXPECT_NEAR(nf.a1, cc.a1, 1e-12 * (1 + std::fabs(cc.a1)));
    const double s = std::max(1.0, max_abs(nf.T) * max_abs(nf.T_inv));
    EXPECT_LE(max_abs(nf.T * nf.T_inv - Mat2::identity()), 1e-12 * s);
    // x = T z maps the normal-form dynamics back onto the original ones.
    EXPECT_LE(max_abs(nf.T * nf.system.A * nf.T_inv - sys.A), 1e-10 * s * (1 + max_abs(sys.A)));
    EXPECT_LE(max_abs(nf.T * nf.system.N * nf.T_inv - sys.N), 1e-10 * s * (1 + max_abs(sys.N)));
    EXPECT_LE(max_abs(nf.T * nf.system.b - sys.b), 1e-10 * s);
  }
}

TEST(NormalForm, LyapunovMatrixTransformsBothWays) {
  const BilinearSystem2D moved = conjugate(kExample, Mat2{2, 1, 0, 1});
  const NormalFormSystem nf = to_controller_normal_form(moved);
  const Mat2 p_nf{1, 1, 1, 3};
  const Mat2 p = lyapunov_matrix_to_original(nf, p_nf);
  EXPECT_LE(max_abs(lyapunov_matrix_to_normal(nf, p) - p_nf), 1e-12);
  // V agrees pointwise: xᵀ P x = zᵀ P_nf z with x = T z.
  const Vec2 z{0.3, -1.7};
  EXPECT_NEAR(quad_form(p, nf.T * z), quad_form(p_nf, z), 1e-12);
}

TEST(CharCoeffs, SimilarityInvariant) {
  testing::Gen gen(22);
  for (int i = 0; i < 1000; ++i) {
    const Mat2 a = gen.mat(-3, 3);
    const Mat2 t = gen.mat(-3, 3);
    if (std::fabs(t.det()) < 0.1) continue;
    const CharCoeffs c1 = char_coeffs(a);
    const CharCoeffs c2 = char_coeffs(inverse(t) * a * t);
    EXPECT_NEAR(c1.a0, c2.a0, 1e-10 * (1 + max_abs(t) * max_abs(inverse(t))));
    EXPECT_NEAR(c1.a1, c2.a1, 1e-10 * (1 + max_abs(t) * max_abs(inverse(t))));
  }
}

TEST(NormalForm, OpenLoopTrajectoriesRelatedByT) {
  const BilinearSystem2D sys{{1, 2, -3, -1}, {0.5, 0, 1, -1}, {1, 2}};
  const NormalFormSystem nf = to_controller_normal_form(sys);
  const ControlLaw u{OpenLoop{0.7}, Mat2::identity()};
  const Vec2 z0{0.4, -0.2};
  const Trajectory tz = simulate(nf.system, u, z0, 1e-3, 2.0);
  const Trajectory tx = simulate(sys, u, nf.T * z0, 1e-3, 2.0);
  ASSERT_EQ(tz.samples.size(), tx.samples.size());
  for (size_t k = 0; k < tz.samples.size(); k += 100) {
    EXPECT_LE(norm(nf.T * tz.samples[k].x - tx.samples[k].x), 1e-9);
  }
}

}  // namespace
}  // namespace clf2d
