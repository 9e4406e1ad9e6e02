#pragma once

// Proposing a quadratic control Lyapunov function V = zᵀ P z for a system in
// controller normal form, with P = [[1, p1], [p1, p2]].

#include <optional>
#include <string>
#include <vector>

#include "clf2d/algebra2.hpp"
#include "clf2d/sysmodel.hpp"
#include "clf2d/verify.hpp"

namespace clf2d {

struct PCandidate {
  double p1 = 0.0;
  double p2 = 0.0;

  Mat2 P() const { return {1.0, p1, p1, p2}; }
  LyapunovForms forms(const BilinearSystem2D& sys) const { return build_Ap_Np(sys, P()); }
  friend bool operator==(const PCandidate&, const PCandidate&) = default;
};

/// bᵀ P Jᵀ A_p J P b. Negative is necessary for x = 0 to be a constrained
/// maximum of Y on M.
double necessary_condition_raw(const Mat2& A, Vec2 b, const Mat2& P);

/// p1 > 0 and p2 - p1² > 0.
constexpr bool necessary_condition_nf(double p1, double p2) {
  return p1 > 0.0 && p2 - p1 * p1 > 0.0;
}

/// The discriminant factor left over in the positive definite N_p case:
/// 4p1²a0 + p1²a1² - 2p1p2a0a1 - 2p1a1 - 2p2a0 + p2²a0² + 1. Feasible iff < 0.
constexpr double condition26(double a0, double a1, double p1, double p2) {
  return 4.0 * p1 * p1 * a0 + p1 * p1 * a1 * a1 - 2.0 * p1 * p2 * a0 * a1 - 2.0 * p1 * a1 -
         2.0 * p2 * a0 + p2 * p2 * a0 * a0 + 1.0;
}

/// The positive definite N_p case admits a design iff the drift is Hurwitz.
constexpr bool theorem_feasible_defcase(double a0, double a1) { return a0 > 0.0 && a1 > 0.0; }

struct CharPair {
  double a0 = 0.0;
  double a1 = 0.0;
};

/// The only drift (a0, a1) = (0, 1/p1) for which the quotient polynomial can
/// degenerate to a negative constant. Throws Error(kNonPositiveP1).
CharPair case2_special(double p1);

struct GridOptions {
  double p1_max = 10.0;
  double p2_max = 10.0;
  int steps = 60;
};

inline constexpr double kGridGapEpsilon = 1e-6;

/// Candidate (p1, p2) pairs in enumeration order: p1 ascending on a log grid
/// over [1e-3 p1_max, p1_max], augmented with p1 = 1/a1 when a1 > 0; for each
/// p1 the gap p2 - p1² is log-spaced over [1e-3 G, G], G = p2_max - p1².
std::vector<PCandidate> candidate_grid(double a1, const GridOptions& grid);

struct TranscriptEntry {
  std::string question;
  std::string answer;
};

struct DesignReport {
  /// "stable-drift", "case2-special" or "grid-fallback".
  std::string branch;
  std::vector<TranscriptEntry> transcript;
  std::optional<PCandidate> candidate;
  std::optional<VerificationOutcome> outcome;
  /// Number of candidates passed to the verifier.
  int candidates_tried = 0;
  std::vector<std::pair<std::string, double>> diagnostics;

  bool found() const { return candidate.has_value() && outcome && outcome->certified(); }
};

/// First certified candidate in grid order. Throws Error(kInvalidArgument)
/// on bad grid bounds.
DesignReport grid_search_P(const NormalFormSystem& nf, const GridOptions& grid = {},
                           const VerifyOptions& verify = {});

/// The decision path: Hurwitz drift → search ordered by condition26;
/// a0 = 0, a1 > 0 with n11 a1 + n21 = 0 → closed-form p1 = 1/a1,
/// p2 = 1/a1² + X; anything else → grid_search_P. Every accepted P carries a
/// certificate.
DesignReport flow_design(const NormalFormSystem& nf, const GridOptions& grid = {},
                         const VerifyOptions& verify = {});

}  // namespace clf2d
