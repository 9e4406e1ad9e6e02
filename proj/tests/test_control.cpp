#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "clf2d/control.hpp"
#include "clf2d/errors.hpp"
#include "clf2d/verify.hpp"
#include "support.hpp"

namespace clf2d {
namespace {

const BilinearSystem2D kExample{{0, 1, 0, -1}, {1, 1, -1, 1}, {0, 1}};
const Mat2 kP{1, 1, 1, 3};

TEST(Gutman, Examples) {
  EXPECT_NEAR(gutman_u(kExample, kP, 0.1, {0, 1}), -0.7, 1e-15);
  EXPECT_EQ(gutman_u(kExample, kP, 0.1, {0, 0}), 0.0);
  EXPECT_NEAR(gutman_u(kExample, kP, 0.1, {1, 0}), -0.1, 1e-15);
}

TEST(Sontag, Examples) {
  const double u = sontag_u(kExample, kP, {0, 1});
  EXPECT_NEAR(u, (4.0 - std::sqrt(38432.0)) / 14.0, 1e-12);
  EXPECT_NEAR(u, -13.7172, 1e-4);
  EXPECT_EQ(sontag_u(kExample, kP, {0, 0}), 0.0);
  // On M the gain vanishes.
  EXPECT_EQ(sontag_u(kExample, kP, {-2.5, 0.5}), 0.0);
}

TEST(Sontag, DecreaseOffM) {
  testing::Gen gen(61);
  const Mat2 ap = lyapunov_form(kExample.A, kP);
  int drawn = 0;
  while (drawn < 100) {
    const Vec2 x = gen.vec(-4, 4);
    const double beta = 2 * dot(kExample.N * x + kExample.b, kP * x);
    if (std::fabs(beta) < 1e-8) continue;
    ++drawn;
    const double a = quad_form(ap, x);
    const double vdot = a + beta * sontag_u(kExample, kP, x);
    EXPECT_LT(vdot, 0.0);
    EXPECT_NEAR(vdot, -std::sqrt(a * a + std::pow(beta, 4)), 1e-9 * (std::fabs(a) + beta * beta));
  }
}

TEST(ClosedLoop, RhsExamples) {
  const ControlLaw off{OpenLoop{0.0}, kP};
  EXPECT_EQ(closed_loop_rhs(kExample, off, {1, 1}), (Vec2{1, -1}));
  const ControlLaw one{OpenLoop{1.0}, kP};
  EXPECT_EQ(closed_loop_rhs(kExample, one, {0, 0}), (Vec2{0, 1}));
  const ControlLaw gutman{GutmanLaw{0.1}, kP};
  const Vec2 r = closed_loop_rhs(kExample, gutman, {0, 1});
  EXPECT_NEAR(r.v1, 0.3, 1e-15);
  EXPECT_NEAR(r.v2, -2.4, 1e-15);
}

TEST(ControlLaw, Validation) {
  EXPECT_THROW((ControlLaw{GutmanLaw{0.0}, kP}.validate()), Error);
  EXPECT_THROW((ControlLaw{SontagLaw{}, Mat2{1, 2, 2, 1}}.validate()), Error);
  EXPECT_NO_THROW((ControlLaw{OpenLoop{3.0}, Mat2{1, 2, 2, 1}}.validate()));
}

TEST(Simulate, OpenLoopMatchesClosedForm) {
  const Trajectory tr = simulate(kExample, {OpenLoop{0.0}, kP}, {0, 1}, 1e-3, 1.0);
  const Vec2 x = tr.samples.back().x;
  EXPECT_NEAR(tr.samples.back().t, 1.0, 1e-12);
  EXPECT_NEAR(x.v1, 1 - std::exp(-1.0), 1e-6);
  EXPECT_NEAR(x.v2, std::exp(-1.0), 1e-6);
}

TEST(Simulate, FourthOrderConvergence) {
  const ControlLaw law{GutmanLaw{0.1}, kP};
  auto end = [&](double dt) { return simulate(kExample, law, {1, 1}, dt, 1.0).samples.back().x; };
  const Vec2 x1 = end(0.1), x2 = end(0.05), x4 = end(0.025);
  const double ratio = norm(x1 - x2) / norm(x2 - x4);
  EXPECT_NEAR(ratio, 16.0, 16.0 * 0.2);
}

TEST(Simulate, SampleGrid) {
  for (auto [dt, T] : {std::pair{1e-3, 50.0}, {0.1, 1.0}, {0.3, 1.0}, {0.25, 0.25}, {1e-2, 0.07}}) {
    const Trajectory tr = simulate(kExample, {OpenLoop{0.0}, kP}, {0.1, 0.1}, dt, T);
    const std::size_t n = static_cast<std::size_t>(std::floor(T / dt + 1e-9)) + 1;
    ASSERT_EQ(tr.samples.size(), n) << dt << " " << T;
    EXPECT_EQ(sample_count(dt, T), n);
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_DOUBLE_EQ(tr.samples[k].t, static_cast<double>(k) * dt);
      EXPECT_GE(tr.samples[k].V, 0.0);
    }
  }
  EXPECT_THROW(simulate(kExample, {OpenLoop{0.0}, kP}, {0, 0}, 0.0, 1.0), Error);
  EXPECT_THROW(simulate(kExample, {OpenLoop{0.0}, kP}, {0, 0}, 0.5, 0.1), Error);
}

TEST(Simulate, Deterministic) {
  const ControlLaw law{SontagLaw{}, kP};
  const Trajectory a = simulate(kExample, law, {3, -2}, 1e-3, 5.0);
  const Trajectory b = simulate(kExample, law, {3, -2}, 1e-3, 5.0);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  EXPECT_EQ(std::memcmp(a.samples.data(), b.samples.data(),
                        a.samples.size() * sizeof(TrajectorySample)),
            0);
}

TEST(Simulate, Diverges) {
  const BilinearSystem2D unstable{{0, 1, 1, 0}, {}, {0, 1}};
  try {
    simulate(unstable, {OpenLoop{0.0}, kP}, {1, 1}, 1e-2, 100.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDiverged);
  }
}

TEST(Monotone, Examples) {
  const Trajectory sontag = simulate(kExample, {SontagLaw{}, kP}, {3, -2}, 1e-3, 20.0);
  EXPECT_TRUE(lyapunov_monotone(sontag, kP, 1e-3).monotone);

  const BilinearSystem2D unstable{{0, 1, 1, 0}, {}, {0, 1}};
  const Trajectory grows = simulate(unstable, {OpenLoop{0.0}, Mat2::identity()}, {1, 1}, 1e-3, 1.0);
  const MonotoneCheck m = lyapunov_monotone(grows, Mat2::identity(), 1e-3);
  EXPECT_FALSE(m.monotone);
  ASSERT_TRUE(m.first_violation.has_value());
  EXPECT_EQ(*m.first_violation, 0u);

  const Trajectory rest = simulate(kExample, {GutmanLaw{0.1}, kP}, {0, 0}, 1e-3, 1.0);
  EXPECT_TRUE(lyapunov_monotone(rest, kP, 1e-3).monotone);
  EXPECT_THROW(lyapunov_monotone(rest, kP, 0.0), Error);
}

// The Gutman loop on the worked example: V decreases monotonically from every
// default start, but the slow closed-loop mode leaves |x(50)| between 7e-3
// and 6e-2, which is what a reference integration with tight tolerances
// gives too.
TEST(Gutman, DefaultStartsDecreaseSlowly) {
  const ControlLaw law{GutmanLaw{0.1}, kP};
  const std::vector<std::pair<Vec2, double>> starts{
      {{3, 3}, 0.0164}, {{3, -3}, 0.0206}, {{-3, 3}, 0.0341},
      {{-3, -3}, 0.0560}, {{1, 1}, 0.0180}, {{0, 1}, 0.0075}};
  for (const auto& [x0, expected] : starts) {
    const Trajectory tr = simulate(kExample, law, x0, 1e-3, 50.0);
    EXPECT_TRUE(lyapunov_monotone(tr, kP, 1e-3).monotone);
    EXPECT_NEAR(norm(tr.samples.back().x), expected, 5e-4);
    EXPECT_LT(norm(tr.samples.back().x), 0.1 * norm(x0));
  }
}

}  // namespace
}  // namespace clf2d
