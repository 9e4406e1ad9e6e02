// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "clf2d/cli.hpp"
#include "clf2d/control.hpp"
#include "clf2d/design.hpp"
#include "clf2d/verify.hpp"
#include "support.hpp"

namespace {

using namespace clf2d;
using clf2d::testing::Gen;
using clf2d::testing::normal_form_system;
using Clock = std::chrono::steady_clock;

const BilinearSystem2D kExample{{0, 1, 0, -1}, {1, 1, -1, 1}, {0, 1}};

struct Tally {
  int failed = 0;
  void report(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Certified matrices collected for the normal-form consistency check.
struct Certified {
  BilinearSystem2D sys;
  Mat2 P;
  std::string origin;
};
std::vector<Certified> g_certified;

void criterion1(Tally& tally) {
  const auto start = Clock::now();
  const DesignReport rep = flow_design(to_controller_normal_form(kExample));
  const double elapsed = seconds_since(start);
  bool ok = rep.found() && rep.branch == "case2-special";
  double err = 1.0;
  if (ok) {
    err = std::max(std::fabs(rep.candidate->p1 - 1.0), std::fabs(rep.candidate->p2 - 3.0));
    g_certified.push_back({kExample, rep.candidate->P(), "criterion 1"});
  }
  bool asked_x = false;
  for (const TranscriptEntry& e : rep.transcript) {
    if (e.question.find("Exist X>0") != std::string::npos &&
        e.answer.find("X=2") != std::string::npos) {
      asked_x = true;
    }
  }
  ok = ok && err <= 1e-12 && asked_x && elapsed < 1.0;
  tally.report(1, ok,
               fmt("design on the worked example -> branch %s, |p - (1,3)| = %.3g, X=2 logged: %s, "
                   "%.3f s",
                   rep.branch.c_str(), err, asked_x ? "yes" : "no", elapsed));
}

void criterion2(Tally& tally) {
  const Mat2 P{1, 1, 1, 3};
  const VerificationOutcome out = verify_clf(kExample, P);
  bool ok = out.certified();
  double coeff_err = kInf;
  double conic_err = kInf;
  if (ok) {
    const Certificate& c = out.certificate();
    ok = c.branches.size() == 1 && c.missed_points.empty() &&
         c.classification == ConicClass::kParabolaOrLines;
    if (ok) {
      const BranchCertificate& b = c.branches[0];
      // The branch is x = (-4 s² - 3 s, s) with s = x2, so Y|M = Z(x2) / d².
      const Polynomial x1_expected{0.0, -3.0, -4.0};
      const Polynomial x2_expected{0.0, 1.0};
      const Polynomial y_expected{0.0, 0.0, -4.0};
      const double d = b.branch.denominator[0];
      coeff_err = 0.0;
      for (int i = 0; i <= 2; ++i) {
        coeff_err = std::max(coeff_err, std::fabs(b.branch.x1[i] / d - x1_expected[i]));
        coeff_err = std::max(coeff_err, std::fabs(b.branch.x2[i] / d - x2_expected[i]));
      }
      for (int i = 0; i <= 4; ++i) {
        coeff_err = std::max(coeff_err, std::fabs(b.numerator[i] / (d * d) - y_expected[i]));
      }
      coeff_err = std::max(coeff_err, std::fabs(b.deflated[0] / (d * d) + 4.0));
      ok = b.branch.denominator.degree() == 0 && b.deflated.degree() == 0 && coeff_err <= 1e-10;
    }
  }
  // q(x) must be a positive multiple of 4 x2² + x1 + 3 x2.
  const nlohmann::json m = cli::conic_coefficients(kExample, P);
  const double k = m["x1"].get<double>();
  if (k > 0.0) {
    conic_err = std::max({std::fabs(m["x1^2"].get<double>()), std::fabs(m["x1x2"].get<double>()),
                          std::fabs(m["x2^2"].get<double>() / k - 4.0),
                          std::fabs(m["x2"].get<double>() / k - 3.0)});
  }
  ok = ok && conic_err <= 1e-12;
  if (out.certified()) g_certified.push_back({kExample, P, "criterion 2"});
  tally.report(2, ok,
               fmt("verify P=[[1,1],[1,3]]: %s, Y|M coefficient error %.3g, M conic error %.3g",
                   out.certified() ? "certified" : "violation", coeff_err, conic_err));
}

void criterion3(Tally& tally) {
  const nlohmann::json g = cli::gutman_coefficients(kExample, Mat2{1, 1, 1, 3});
  const double expected[] = {0.0, 0.0, 4.0, 1.0, 3.0};
  const char* keys[] = {"x1^2", "x1x2", "x2^2", "x1", "x2"};
  double err = 0.0;
  for (int i = 0; i < 5; ++i) err = std::max(err, std::fabs(g[keys[i]].get<double>() - expected[i]));
  // Pointwise agreement of the law itself.
  Gen gen(7);
  for (int i = 0; i < 100; ++i) {
    const Vec2 x = gen.vec(-5, 5);
    const double u = gutman_u(kExample, Mat2{1, 1, 1, 3}, 0.1, x);
    const double ref = -0.1 * (4 * x.v2 * x.v2 + x.v1 + 3 * x.v2);
    err = std::max(err, std::fabs(u - ref) / std::max(1.0, std::fabs(ref)));
  }
  tally.report(3, err <= 1e-12,
               fmt("Gutman law -alpha(4 x2^2 + x1 + 3 x2), max coefficient error %.3g", err));
}

void criterion4(Tally& tally) {
  const double values[] = {-2, -1, -0.5, 0.5, 1, 2};
  int mismatches = 0;
  int certified = 0;
  const auto start = Clock::now();
  for (double a0 : values) {
    for (double a1 : values) {
      const BilinearSystem2D sys = normal_form_system(a0, a1, Mat2::identity());
      const DesignReport rep = grid_search_P(to_controller_normal_form(sys));
      const bool expected = a0 > 0.0 && a1 > 0.0;
      if (rep.found() != expected) {
        ++mismatches;
        std::printf("  mismatch at a0=%g a1=%g: found=%d\n", a0, a1, rep.found() ? 1 : 0);
      }
      if (rep.found()) {
        ++certified;
        g_certified.push_back({sys, rep.candidate->P(), "criterion 4"});
      }
    }
  }
  const double elapsed = seconds_since(start);
  tally.report(4, mismatches == 0 && elapsed < 30.0,
               fmt("Hurwitz battery, 36 systems: %d certified, %d mismatches, %.2f s", certified,
                   mismatches, elapsed));
}

void criterion5(Tally& tally) {
  Gen gen(2024);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double a0 = gen.uniform(-5, 5), a1 = gen.uniform(-5, 5);
    const double p1 = gen.uniform(-5, 5), p2 = gen.uniform(-5, 5);
    const double v26 = condition26(a0, a1, p1, p2);
    const double r27 = (a1 * p1 - a0 * p2) - 1.0;
    const double v27 = r27 * r27 + 4.0 * a0 * (p1 * p1 - p2);
    const double r28 = (a0 * p2 - a1 * p1) - 1.0;
    const double v28 = r28 * r28 + 4.0 * p1 * (a0 * p1 - a1);
    const double scale = std::max(
        {std::fabs(v26), r27 * r27, std::fabs(4.0 * a0 * p1 * p1), std::fabs(4.0 * a0 * p2),
         std::fabs(4.0 * a1 * p1), 1.0});
    worst = std::max({worst, std::fabs(v26 - v27) / scale, std::fabs(v26 - v28) / scale});
  }
  tally.report(5, worst <= 1e-9,
               fmt("three forms of the feasibility polynomial on 1e4 tuples, max relative gap %.3g",
                   worst));
}

void criterion6(Tally& tally) {
  Gen gen(6);
  int disagreements = 0;
  int certificates = 0;
  int violations = 0;
  const auto start = Clock::now();
  for (int i = 0; i < 1000; ++i) {
    const BilinearSystem2D sys = gen.system(-3, 3);
    const Mat2 P = gen.spd(-3, 3);
    const VerificationOutcome out = verify_clf(sys, P);
    if (out.certified()) {
      ++certificates;
      const SampleSummary s = sample_oracle(sys, P, 2000, 1e-3);
      if (!s.vacuous && !(s.worst_y < -1e-9)) {
        ++disagreements;
        std::printf("  pair %d: certified but sampled Y=%.3g at (%.6g, %.6g)\n", i, s.worst_y,
                    s.worst_x.v1, s.worst_x.v2);
      }
      g_certified.push_back({sys, P, "criterion 6"});
    } else {
      ++violations;
      const Violation& v = out.violation();
      const LyapunovForms f = build_Ap_Np(sys, P);
      const ConicDescription conic{f.N_p, P * sys.b, v.classification};
      const Vec2 x = v.witness;
      const double q = conic.q(x);
      const double y = quad_form(f.A_p, x);
      const bool ok = std::fabs(q) <= 1e-8 * conic.q_magnitude(x) && norm(x) > 1e-6 &&
                      y >= -1e-12 * quad_form_magnitude(f.A_p, x);
      if (!ok) {
        ++disagreements;
        std::printf("  pair %d: witness (%.6g, %.6g) q=%.3g Y=%.3g breaks its invariants\n", i,
                    x.v1, x.v2, q, y);
      }
    }
  }
  const double elapsed = seconds_since(start);
  tally.report(6, disagreements == 0 && elapsed < 60.0,
               fmt("1000 random pairs (%d certified, %d violations): %d disagreements, %.2f s",
                   certificates, violations, disagreements, elapsed));
}

void criterion7(Tally& tally) {
  const Mat2 P{1, 1, 1, 3};
  ControlLaw gutman{GutmanLaw{0.1}, P};
  const std::vector<Vec2> starts{{3, 3}, {3, -3}, {-3, 3}, {-3, -3}, {1, 1}, {0, 1}};
  bool monotone = true;
  bool small = true;
  std::string norms;
  for (Vec2 x0 : starts) {
    const Trajectory traj = simulate(kExample, gutman, x0, 1e-3, 50.0);
    const MonotoneCheck mono = lyapunov_monotone(traj, P, 1e-3);
    const double final_norm = norm(traj.samples.back().x);
    monotone = monotone && mono.monotone;
    small = small && final_norm < 1e-2;
    norms += fmt(" %.3g", final_norm);
  }

  Gen gen(77);
  int sontag_ok = 0;
  int drawn = 0;
  const LyapunovForms f = build_Ap_Np(kExample, P);
  while (drawn < 100) {
    const Vec2 x = gen.vec(-5, 5);
    const Vec2 g = kExample.N * x + kExample.b;
    const double beta = 2.0 * dot(g, P * x);
    if (std::fabs(beta) < 1e-6) continue;  // on or next to M
    ++drawn;
    const double a = quad_form(f.A_p, x);
    const double u = sontag_u(kExample, P, x);
    if (a + beta * u < 0.0) ++sontag_ok;
  }
  tally.report(7, monotone && small && sontag_ok == 100,
               fmt("Gutman alpha=0.1: V monotone %s, |x(50)| =%s (need < 1e-2 each); Sontag "
                   "decrease at %d/100 off-M states",
                   monotone ? "yes" : "no", norms.c_str(), sontag_ok));
}

void criterion8(Tally& tally) {
  int checked = 0;
  int failures = 0;
  int skipped = 0;
  for (const Certified& c : g_certified) {
    if (!is_controllable(c.sys)) {
      ++skipped;
      continue;
    }
    const NormalFormSystem nf = to_controller_normal_form(c.sys);
    const Mat2 pn = lyapunov_matrix_to_normal(nf, c.P);
    const double p1 = pn.m12 / pn.m11;
    const double p2 = pn.m22 / pn.m11;
    const double raw = necessary_condition_raw(c.sys.A, c.sys.b, c.P);
    ++checked;
    if (!necessary_condition_nf(p1, p2) || !(raw < 0.0)) {
      ++failures;
      std::printf("  %s: p1=%.6g p2-p1^2=%.3g raw=%.3g\n", c.origin.c_str(), p1, p2 - p1 * p1, raw);
    }
  }
  tally.report(8, failures == 0 && checked > 0,
               fmt("%d certified P checked in normal form (%d uncontrollable skipped): %d "
                   "violate p1>0, p2-p1^2>0 or raw<0",
                   checked, skipped, failures));
}

}  // namespace

int main() {
  Tally tally;
  criterion1(tally);
  criterion2(tally);
  criterion3(tally);
  criterion4(tally);
  criterion5(tally);
  criterion6(tally);
  criterion7(tally);
  criterion8(tally);
  std::printf("%d of 8 criteria failed\n", tally.failed);
  return tally.failed == 0 ? 0 : 1;
}
