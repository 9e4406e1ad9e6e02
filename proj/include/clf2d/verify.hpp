#pragma once

// Certification of the design condition
//   Y(x) = xᵀ A_p x < 0  for every x ≠ 0 with q(x) = xᵀ N_p x + 2 xᵀ P b = 0,
// where A_p = AᵀP + PA and N_p = NᵀP + PN.
//
// The conic q = 0 always passes through the origin. It is split into
// rational branches x(t) = X(t) / d(t) with polynomial X, d. Along a branch
// Y = Z(t) / d(t)², and Z carries a double root at every parameter mapping to
// the origin. Dividing those out leaves a polynomial whose strict negativity
// on the branch domain is decided with Sturm sequences.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clf2d/algebra2.hpp"
#include "clf2d/polynomial.hpp"
#include "clf2d/sysmodel.hpp"

namespace clf2d {

struct LyapunovForms {
  Mat2 A_p;
  Mat2 N_p;
};

LyapunovForms build_Ap_Np(const BilinearSystem2D& sys, const Mat2& P);

enum class ConicClass {
  kEllipseLike,
  kHyperbolaLike,
  kParabolaOrLines,
  kSingleLine,
  kWholePlane,
  kEmptyOrOriginOnly,
};

std::string_view to_string(ConicClass c);

/// The set q(x) = xᵀ N_p x + 2 xᵀ c = 0, with c = P b.
struct ConicDescription {
  Mat2 N_p;
  Vec2 c;
  ConicClass classification = ConicClass::kWholePlane;

  double q(Vec2 x) const { return quad_form(N_p, x) + 2.0 * dot(x, c); }
  /// Σ of absolute term magnitudes of q at x.
  double q_magnitude(Vec2 x) const;
};

/// Throws Error(kNotSymmetric) if N_p is not symmetric.
ConicDescription describe_conic(const Mat2& N_p, Vec2 c, double tol = kDefaultDefinitenessTol);

/// Circle normalization of a positive definite conic: with y = L x - y0 the
/// conic becomes |y|² = a. The circle is traversed as
///   y(t) = orientation * sqrt(a) * (1 - t², 2t) / (1 + t²),
/// and the origin x = 0 sits at t = t0.
struct CircleTransform {
  Mat2 L;
  Vec2 y0;
  double a = 0.0;
  double orientation = 1.0;
  /// Unset when a == 0 (the conic is the origin alone).
  std::optional<double> t0;
};

/// Throws Error(kNotPositiveDefinite).
CircleTransform transform_to_circle(const Mat2& N_p, Vec2 c,
                                    double tol = kDefaultDefinitenessTol);

enum class BranchKind { kEllipse, kHyperbola, kParabola, kLine };

std::string_view to_string(BranchKind k);

/// x(t) = (x1(t), x2(t)) / denominator(t). When excludes_zero is set the
/// parameter domain is the reals minus t = 0, otherwise all reals.
struct Branch {
  BranchKind kind = BranchKind::kLine;
  Polynomial x1;
  Polynomial x2;
  Polynomial denominator = Polynomial::constant(1.0);
  bool excludes_zero = false;
  /// Parameters with x(t) = 0.
  std::vector<double> origin_params;

  Vec2 point(double t) const;
  Vec2 numerator(double t) const { return {x1(t), x2(t)}; }
};

struct Parametrization {
  std::vector<Branch> branches;
  /// Points of the conic not reached by any branch parameter.
  std::vector<Vec2> missed_points;
};

/// Exact cover of {x : q(x) = 0} by branches plus missed points. Empty for
/// kEmptyOrOriginOnly. Throws Error(kInvalidArgument) for kWholePlane.
Parametrization parametrize_branches(const ConicDescription& conic,
                                     double tol = kDefaultDefinitenessTol);

/// Z(t) = Xᵀ A_p X for a branch numerator X(t).
Polynomial restrict_quadratic_form(const Mat2& form, const Branch& branch);

struct BranchCertificate {
  BranchKind kind = BranchKind::kLine;
  Branch branch;
  Polynomial numerator;  // Z(t)
  Polynomial deflated;   // Z(t) with every origin double root removed
  std::vector<double> origin_params;
  int deflated_real_roots = 0;
  double deflated_at_zero = 0.0;
};

struct Certificate {
  ConicClass classification = ConicClass::kWholePlane;
  bool vacuous = false;
  std::vector<BranchCertificate> branches;
  std::vector<Vec2> missed_points;
  std::vector<double> missed_point_values;  // Y at each missed point
};

struct Violation {
  ConicClass classification = ConicClass::kWholePlane;
  Vec2 witness;
  double q_value = 0.0;
  double y_value = 0.0;
  /// Index of the failing branch, or -1 for a missed point / whole plane.
  int branch_index = -1;
  std::string reason;
};

struct VerificationOutcome {
  std::variant<Certificate, Violation> result;

  bool certified() const { return std::holds_alternative<Certificate>(result); }
  const Certificate& certificate() const { return std::get<Certificate>(result); }
  const Violation& violation() const { return std::get<Violation>(result); }
};

struct VerifyOptions {
  double definiteness_tol = kDefaultDefinitenessTol;
  double deflation_tol = kDefaultDeflationTol;
  double poly_tol = kDefaultPolyTol;
};

/// Decides Y < 0 on M \ {0}. Throws Error(kNotPositiveDefinite) unless P is
/// symmetric positive definite.
VerificationOutcome verify_clf(const BilinearSystem2D& sys, const Mat2& P,
                               const VerifyOptions& options = {});

/// Dense sampling of M through the pencil of lines through the origin: the
/// line along direction d meets the conic again at x = -2 (dᵀc)/(dᵀN_p d) d,
/// and lines with dᵀN_p d = dᵀc = 0 lie entirely inside it. Independent of
/// the branch machinery above; intended as a test oracle.
struct SampleSummary {
  bool vacuous = true;
  std::size_t samples = 0;
  /// Largest sampled Y (the least negative one), over samples with
  /// |x| > min_norm.
  double worst_y = -kInf;
  Vec2 worst_x;
};

SampleSummary sample_oracle(const BilinearSystem2D& sys, const Mat2& P, int n_samples,
                            double min_norm = 1e-4, double max_norm = 1e6);

}  // namespace clf2d
