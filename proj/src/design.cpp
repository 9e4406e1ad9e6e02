#include "clf2d/design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clf2d/errors.hpp"

namespace clf2d {
namespace {

// Equality tests on structural quantities (a0 = 0, n11 a1 + n21 = 0).
constexpr double kStructuralTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

bool near_zero(double v, double scale) { return std::fabs(v) <= kStructuralTol * scale; }

void validate(const GridOptions& grid) {
  if (!(grid.p1_max > 0.0) || !(grid.p2_max > 0.0) || grid.steps < 2) {
    throw Error(ErrorKind::kInvalidArgument, "grid needs p1_max > 0, p2_max > 0 and steps >= 2");
  }
}

double log_point(double top, int i, int steps) {
  return top * std::pow(10.0, -3.0 + 3.0 * i / (steps - 1));
}

void record_accepted(DesignReport& report, const NormalFormSystem& nf) {
  const PCandidate& c = *report.candidate;
  report.diagnostics.emplace_back("p1", c.p1);
  report.diagnostics.emplace_back("p2", c.p2);
  report.diagnostics.emplace_back("condition26", condition26(nf.a0, nf.a1, c.p1, c.p2));
  report.diagnostics.emplace_back("necessary_condition_raw",
                                  necessary_condition_raw(nf.system.A, nf.system.b, c.P()));
}

// Verifies candidates in the given order; stops at the first certificate.
bool try_candidates(DesignReport& report, const NormalFormSystem& nf,
                    const std::vector<PCandidate>& order, const VerifyOptions& verify) {
  for (const PCandidate& c : order) {
    ++report.candidates_tried;
    VerificationOutcome outcome = verify_clf(nf.system, c.P(), verify);
    if (outcome.certified()) {
      report.candidate = c;
      report.outcome = std::move(outcome);
      return true;
    }
  }
  return false;
}

void run_fallback(DesignReport& report, const NormalFormSystem& nf, const GridOptions& grid,
                  const VerifyOptions& verify) {
  DesignReport sub = grid_search_P(nf, grid, verify);
  report.branch = sub.branch;
  report.candidates_tried += sub.candidates_tried;
  for (auto& e : sub.transcript) report.transcript.push_back(std::move(e));
  report.candidate = sub.candidate;
  report.outcome = std::move(sub.outcome);
  for (auto& d : sub.diagnostics) report.diagnostics.push_back(std::move(d));
}

}  // namespace

double necessary_condition_raw(const Mat2& A, Vec2 b, const Mat2& P) {
  const Mat2 a_p = lyapunov_form(A, P);
  return quad_form(a_p, kJ * (P * b));
}

CharPair case2_special(double p1) {
  if (!(p1 > 0.0)) throw Error(ErrorKind::kNonPositiveP1, "p1 must be positive");
  return {0.0, 1.0 / p1};
}

std::vector<PCandidate> candidate_grid(double a1, const GridOptions& grid) {
  validate(grid);
  std::vector<double> p1s;
  p1s.reserve(static_cast<size_t>(grid.steps) + 1);
  for (int i = 0; i < grid.steps; ++i) p1s.push_back(log_point(grid.p1_max, i, grid.steps));
  if (a1 > 0.0 && 1.0 / a1 <= grid.p1_max) p1s.push_back(1.0 / a1);
  std::sort(p1s.begin(), p1s.end());
  p1s.erase(std::unique(p1s.begin(), p1s.end()), p1s.end());

  std::vector<PCandidate> out;
  for (double p1 : p1s) {
    const double room = grid.p2_max - p1 * p1;
    if (room <= kGridGapEpsilon) continue;
    for (int j = 0; j < grid.steps; ++j) {
      const double gap = log_point(room, j, grid.steps);
      if (gap <= kGridGapEpsilon) continue;
      out.push_back({p1, p1 * p1 + gap});
    }
  }
  return out;
}

DesignReport grid_search_P(const NormalFormSystem& nf, const GridOptions& grid,
                           const VerifyOptions& verify) {
  DesignReport report;
  report.branch = "grid-fallback";
  const std::vector<PCandidate> order = candidate_grid(nf.a1, grid);
  const bool hit = try_candidates(report, nf, order, verify);
  report.transcript.push_back(
      {"Grid search over " + std::to_string(order.size()) + " candidates (p1 <= " +
           fmt(grid.p1_max) + ", p2 <= " + fmt(grid.p2_max) + ", steps " +
           std::to_string(grid.steps) + ")",
       hit ? "certified p1=" + fmt(report.candidate->p1) + ", p2=" + fmt(report.candidate->p2)
           : "no candidate certified"});
  if (hit) record_accepted(report, nf);
  return report;
}

DesignReport flow_design(const NormalFormSystem& nf, const GridOptions& grid,
                         const VerifyOptions& verify) {
  validate(grid);
  DesignReport report;
  const double a0 = nf.a0;
  const double a1 = nf.a1;
  const Mat2& n = nf.system.N;
  report.diagnostics.emplace_back("a0", a0);
  report.diagnostics.emplace_back("a1", a1);

  const bool stable = is_asymptotically_stable(a0, a1);
  report.transcript.push_back({"Is the system asymptotically stable?",
                               "a0=" + fmt(a0) + ", a1=" + fmt(a1) + "; " + yes_no(stable)});
  if (stable) {
    report.branch = "stable-drift";
    std::vector<PCandidate> order = candidate_grid(a1, grid);
    std::stable_sort(order.begin(), order.end(), [&](const PCandidate& x, const PCandidate& y) {
      const double cx = condition26(a0, a1, x.p1, x.p2);
      const double cy = condition26(a0, a1, y.p1, y.p2);
      if (cx != cy) return cx < cy;
      if (x.p1 != y.p1) return x.p1 < y.p1;
      return x.p2 < y.p2;
    });
    const bool hit = try_candidates(report, nf, order, verify);
    report.transcript.push_back(
        {"Search (p1, p2) minimizing condition26 and verify",
         hit ? "certified p1=" + fmt(report.candidate->p1) + ", p2=" + fmt(report.candidate->p2) +
                   ", condition26=" +
                   fmt(condition26(a0, a1, report.candidate->p1, report.candidate->p2))
             : "no candidate certified"});
    if (hit) record_accepted(report, nf);
    return report;
  }

  const double scale_n = std::max(max_abs(n), 1.0);
  const double det_n = n.det();
  const double trace_n = n.trace();
  const bool n_tests = det_n > 0.0 && near_zero(trace_n, scale_n) && n.m11 != 0.0 &&
                       sgn(n.m11) == -sgn(n.m21);
  report.transcript.push_back(
      {"det(N)>0, trace(N)=0, n11!=0 and sgn(n11)=-sgn(n21)?",
       "det(N)=" + fmt(det_n) + ", trace(N)=" + fmt(trace_n) + ", n11=" + fmt(n.m11) +
           ", n21=" + fmt(n.m21) + "; " + yes_no(n_tests) +
           (n_tests ? " (branch outcome not reconstructed)" : "")});

  const double scale_a = std::max(std::fabs(a1), 1.0);
  const bool marginal = near_zero(a0, scale_a) && a1 > 0.0;
  report.transcript.push_back({"Is a0=0 and a1>0?", "a0=" + fmt(a0) + ", a1=" + fmt(a1) + "; " +
                                                        yes_no(marginal)});
  if (marginal) {
    const double s = n.m11 * a1 + n.m21;
    const double s_scale = std::max({std::fabs(n.m11 * a1), std::fabs(n.m21), 1.0});
    const bool s_zero = near_zero(s, s_scale);
    report.transcript.push_back({"Is n11*a1+n21>0?", "n11*a1+n21=" + fmt(s_zero ? 0.0 : s) +
                                                         "; " + yes_no(!s_zero && s > 0.0)});
    if (!s_zero && s > 0.0) {
      report.transcript.push_back({"Continue on the n11*a1+n21>0 branch",
                                   "branch not reconstructed; falling back to grid search"});
    } else {
      report.transcript.push_back({"Is n11*a1+n21=0?", yes_no(s_zero)});
      if (s_zero) {
        std::optional<double> x;
        if (n.m21 != 0.0) x = (n.m22 + a1 * n.m12) / (-a1 * n.m21);
        const bool x_ok = x && *x > 0.0;
        report.transcript.push_back(
            {"Exist X>0 such that n22+a1*(n21*X+n12)=0?",
             (x ? "X=" + fmt(*x) : std::string("X undetermined (n21=0)")) + "; " + yes_no(x_ok)});
        if (x_ok) {
          const PCandidate c{1.0 / a1, 1.0 / (a1 * a1) + *x};
          report.transcript.push_back(
              {"Compute p1 and p2", "p1=1/a1=" + fmt(c.p1) + ", p2=1/a1^2+X=" + fmt(c.p2)});
          report.transcript.push_back({"Set up the matrix P", "P=[[1, " + fmt(c.p1) + "], [" +
                                                                  fmt(c.p1) + ", " + fmt(c.p2) +
                                                                  "]]"});
          ++report.candidates_tried;
          VerificationOutcome outcome = verify_clf(nf.system, c.P(), verify);
          const bool ok = outcome.certified();
          report.transcript.push_back({"Does Y<0 hold on M?", ok ? "yes (certified)" : "no"});
          if (ok) {
            report.branch = "case2-special";
            report.candidate = c;
            report.outcome = std::move(outcome);
            record_accepted(report, nf);
            return report;
          }
        }
      }
    }
  }
  run_fallback(report, nf, grid, verify);
  return report;
}

}  // namespace clf2d
