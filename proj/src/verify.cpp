#include "clf2d/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clf2d/errors.hpp"

namespace clf2d {
namespace {

// Relative size below which a conic coefficient is treated as structurally
// zero when picking the branch layout (hyperbola centre term, parabola axis).
constexpr double kStructuralZero = 1e-12;
// Parametrizations must reproduce x(t0) = 0 to this relative accuracy.
constexpr double kOriginCheck = 1e-10;
// Witness points closer to the origin than this are rejected.
constexpr double kWitnessMinNorm = 1e-6;
// A deflated polynomial still vanishing at t0 to this relative accuracy has
// a higher-multiplicity root there.
constexpr double kResidualRoot = 1e-10;
constexpr double kWitnessRootSlack = 1e-12;

struct VecPoly {
  Polynomial x1;
  Polynomial x2;
};

// x = xi * e1 + eta * e2
VecPoly combine(const Polynomial& xi, Vec2 e1, const Polynomial& eta, Vec2 e2) {
  return {e1.v1 * xi + e2.v1 * eta, e1.v2 * xi + e2.v2 * eta};
}

VecPoly apply(const Mat2& m, const Polynomial& y1, const Polynomial& y2) {
  return {m.m11 * y1 + m.m12 * y2, m.m21 * y1 + m.m22 * y2};
}

Branch make_branch(BranchKind kind, VecPoly x, Polynomial denominator, bool excludes_zero,
                   std::vector<double> origin_params) {
  Branch b;
  b.kind = kind;
  b.x1 = std::move(x.x1);
  b.x2 = std::move(x.x2);
  b.denominator = std::move(denominator);
  b.excludes_zero = excludes_zero;
  b.origin_params = std::move(origin_params);
  return b;
}

void check_origin_params(const Branch& b) {
  const double scale =
      std::max(b.x1.max_abs_coeff(), b.x2.max_abs_coeff());
  for (double t0 : b.origin_params) {
    const double mag = std::max(b.x1.magnitude_at(t0), b.x2.magnitude_at(t0));
    const Vec2 x = b.numerator(t0);
    if (max_abs(x) > kOriginCheck * std::max(mag, scale)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "parametrization does not reach the origin at its origin parameter");
    }
  }
}

Parametrization parametrize_ellipse(const Mat2& n_p, Vec2 c, double tol) {
  const CircleTransform ct = transform_to_circle(n_p, c, tol);
  Parametrization out;
  if (!ct.t0) return out;
  const double r = ct.orientation * std::sqrt(ct.a);
  const Mat2 l_inv = inverse(ct.L);
  // Numerators of y(t) + y0 over the common denominator 1 + t².
  const Polynomial y1{r + ct.y0.v1, 0.0, -r + ct.y0.v1};
  const Polynomial y2{ct.y0.v2, 2.0 * r, ct.y0.v2};
  out.branches.push_back(make_branch(BranchKind::kEllipse, apply(l_inv, y1, y2),
                                     Polynomial{1.0, 0.0, 1.0}, false, {*ct.t0}));
  out.missed_points.push_back(l_inv * (Vec2{-r, 0.0} + ct.y0));
  return out;
}

Parametrization parametrize_hyperbola(const Mat2& n_p, Vec2 c) {
  const SymmetricEigen eig = symmetric_eigen(n_p);
  const double lp = eig.larger;
  const double ln = eig.smaller;
  const Vec2 e1 = eig.larger_vector;
  const Vec2 e2 = kJ * e1;
  const double c1 = dot(e1, c);
  const double c2 = dot(e2, c);
  const double s1 = std::sqrt(lp);
  const double s2 = std::sqrt(-ln);
  // In rescaled principal coordinates the conic reads u v = kappa, with
  // u = xi~ + eta~, v = xi~ - eta~.
  const double kappa = c1 * c1 / lp + c2 * c2 / ln;
  const double kappa_scale = c1 * c1 / lp + c2 * c2 / -ln;
  const double xi0 = c1 / s1;
  const double eta0 = -c2 / s2;
  const double u0 = xi0 + eta0;
  const double v0 = xi0 - eta0;

  Parametrization out;
  if (std::fabs(kappa) > 1e-14 * kappa_scale) {
    // xi~ = (t² + kappa) / 2t, eta~ = (t² - kappa) / 2t
    const Polynomial xi{kappa / s1, -2.0 * c1 / lp, 1.0 / s1};
    const Polynomial eta{-kappa / s2, -2.0 * c2 / ln, 1.0 / s2};
    out.branches.push_back(make_branch(BranchKind::kHyperbola, combine(xi, e1, eta, e2),
                                       Polynomial{0.0, 2.0}, true, {u0}));
    return out;
  }
  // Degenerate: the asymptotes u = 0 and v = 0 themselves.
  const double m = std::fabs(xi0) + std::fabs(eta0);
  const bool origin_on_u = m == 0.0 || std::fabs(u0) <= std::fabs(v0) ||
                           std::fabs(u0) <= kStructuralZero * m;
  const bool origin_on_v = m == 0.0 || std::fabs(v0) < std::fabs(u0) ||
                           std::fabs(v0) <= kStructuralZero * m;
  const Polynomial xi{-c1 / lp, 1.0 / s1};
  const Polynomial eta_u{-c2 / ln, -1.0 / s2};
  const Polynomial eta_v{-c2 / ln, 1.0 / s2};
  out.branches.push_back(make_branch(BranchKind::kLine, combine(xi, e1, eta_u, e2),
                                     Polynomial::constant(1.0), false,
                                     origin_on_u ? std::vector<double>{xi0} : std::vector<double>{}));
  out.branches.push_back(make_branch(BranchKind::kLine, combine(xi, e1, eta_v, e2),
                                     Polynomial::constant(1.0), false,
                                     origin_on_v ? std::vector<double>{xi0} : std::vector<double>{}));
  return out;
}

Parametrization parametrize_rank_one(const Mat2& n_p, Vec2 c, Definiteness def) {
  const SymmetricEigen eig = symmetric_eigen(n_p);
  const bool positive = def == Definiteness::kPositiveSemidefinite;
  const double lambda = positive ? eig.larger : eig.smaller;
  Vec2 w = positive ? eig.larger_vector : kJ * eig.larger_vector;
  if (std::fabs(w.v1) >= std::fabs(w.v2) ? w.v1 < 0.0 : w.v2 < 0.0) w = -w;
  const Vec2 n{w.v2, -w.v1};
  const double nc = dot(n, c);
  const double wc = dot(w, c);
  const double c_scale = max_abs(c);

  Parametrization out;
  if (std::fabs(nc) > kStructuralZero * c_scale) {
    // x = s(t) n + t w with q linear in s.
    const Polynomial s{0.0, -wc / nc, -lambda / (2.0 * nc)};
    const Polynomial t{0.0, 1.0};
    out.branches.push_back(make_branch(BranchKind::kParabola, combine(s, n, t, w),
                                       Polynomial::constant(1.0), false, {0.0}));
    return out;
  }
  // No linear term along the null direction: q = lambda t² + 2 t (w.c), i.e.
  // the line t = 0 and possibly a parallel one.
  const Polynomial s{0.0, 1.0};
  out.branches.push_back(make_branch(BranchKind::kLine, combine(s, n, Polynomial{}, w),
                                     Polynomial::constant(1.0), false, {0.0}));
  if (std::fabs(wc) > kStructuralZero * c_scale) {
    const double t1 = -2.0 * wc / lambda;
    out.branches.push_back(make_branch(BranchKind::kLine,
                                       combine(s, n, Polynomial::constant(t1), w),
                                       Polynomial::constant(1.0), false, {}));
  }
  return out;
}

double term_scale(const Branch& b) {
  return std::max(b.x1.max_abs_coeff(), b.x2.max_abs_coeff());
}

Violation make_violation(const ConicDescription& conic, const Mat2& a_p, Vec2 x, int index,
                         std::string reason) {
  Violation v;
  v.classification = conic.classification;
  v.witness = x;
  v.q_value = conic.q(x);
  v.y_value = quad_form(a_p, x);
  v.branch_index = index;
  v.reason = std::move(reason);
  return v;
}

// Looks for a branch point away from the origin where Y >= 0 (up to
// roundoff), using roots and critical points of the deflated polynomial,
// neighbourhoods of the origin parameters and far-out parameters.
Violation witness_search(const Branch& branch, const Polynomial& deflated, const Mat2& a_p,
                         const ConicDescription& conic, int index, std::string reason) {
  std::vector<double> ts{0.0, 1.0, -1.0, 1e-3, -1e-3, 1e-6, -1e-6};
  std::vector<double> roots;
  double far = 1.0;
  if (!deflated.is_zero() && deflated.degree() > 0) {
    far += cauchy_root_bound(deflated);
    roots = real_roots(deflated);
    for (double r : roots) {
      for (double d : {1e-9, 1e-6, 1e-3}) {
        const double h = d * std::max(1.0, std::fabs(r));
        ts.push_back(r - h);
        ts.push_back(r + h);
      }
    }
    const Polynomial slope = deflated.derivative();
    if (slope.degree() > 0) {
      for (double r : real_roots(slope)) ts.push_back(r);
    }
  }
  for (double t0 : branch.origin_params) {
    far = std::max(far, std::fabs(t0) + 1.0);
    for (double d : {1.0, 1e-1, 1e-2, 1e-3, 1e-4}) {
      ts.push_back(t0 - d);
      ts.push_back(t0 + d);
    }
  }
  for (double k : {1.0, 10.0, 100.0}) {
    ts.push_back(k * far);
    ts.push_back(-k * far);
  }

  auto usable = [&](double t, Vec2& x, double& score) {
    if (branch.excludes_zero && t == 0.0) return false;
    x = branch.point(t);
    if (!std::isfinite(x.v1) || !std::isfinite(x.v2)) return false;
    if (norm(x) <= kWitnessMinNorm) return false;
    const double y = quad_form(a_p, x);
    const double mag = quad_form_magnitude(a_p, x);
    score = mag > 0.0 ? y / mag : (y >= 0.0 ? 0.0 : -1.0);
    return true;
  };

  // A sign change of Y away from the origin is the most robust witness:
  // take the one farthest from the origin.
  Vec2 x;
  double score = 0.0;
  std::optional<Vec2> crossing;
  for (double r : roots) {
    if (usable(r, x, score) && score >= -kWitnessRootSlack &&
        (!crossing || norm(x) > norm(*crossing))) {
      crossing = x;
    }
  }
  // The point approached as t -> ±inf (the missed point of a closed branch).
  const int dd = branch.denominator.degree();
  if (dd > 0 && branch.x1.degree() <= dd && branch.x2.degree() <= dd) {
    const double lead = branch.denominator.leading();
    x = {branch.x1[dd] / lead, branch.x2[dd] / lead};
    const double mag = quad_form_magnitude(a_p, x);
    if (norm(x) > kWitnessMinNorm && mag > 0.0 &&
        quad_form(a_p, x) / mag >= -kWitnessRootSlack &&
        (!crossing || norm(x) > norm(*crossing))) {
      crossing = x;
    }
  }
  if (crossing) return make_violation(conic, a_p, *crossing, index, std::move(reason));

  bool found = false;
  double best_score = -kInf;
  Vec2 best_x;
  for (double t : ts) {
    if (usable(t, x, score) && (!found || score > best_score)) {
      found = true;
      best_score = score;
      best_x = x;
    }
  }
  return make_violation(conic, a_p, best_x, index, std::move(reason));
}

std::variant<BranchCertificate, Violation> analyze_branch(const Branch& branch, const Mat2& a_p,
                                                          const ConicDescription& conic,
                                                          const VerifyOptions& options,
                                                          int index) {
  {
    int den_roots = sturm_real_root_count(branch.denominator, -kInf, kInf, options.poly_tol);
    if (branch.excludes_zero && branch.denominator(0.0) == 0.0) --den_roots;
    if (den_roots != 0) {
      throw Error(ErrorKind::kInvalidArgument, "branch denominator vanishes on its domain");
    }
  }
  const Polynomial z = restrict_quadratic_form(a_p, branch);
  const double x_scale = term_scale(branch);
  const double z_reference = max_abs(a_p) * x_scale * x_scale;
  if (z.max_abs_coeff() <= 1e-12 * z_reference) {
    return witness_search(branch, Polynomial{}, a_p, conic, index, "Y vanishes along branch");
  }

  Polynomial q = z;
  for (double t0 : branch.origin_params) {
    try {
      q = deflate_double_root(q, t0, options.deflation_tol);
      // Strip further (t - t0)² factors; an odd leftover means Y changes
      // sign arbitrarily close to the origin.
      while (q.degree() >= 1 &&
             std::fabs(q(t0)) <= kResidualRoot * std::max(q.max_abs_coeff(), q.magnitude_at(t0))) {
        q = deflate_double_root(q, t0, options.deflation_tol);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNotADoubleRoot) throw;
      return witness_search(branch, q, a_p, conic, index,
                            "odd multiplicity at the origin parameter");
    }
  }

  const bool negative = branch.excludes_zero ? strictly_negative_off_zero(q, options.poly_tol)
                                             : strictly_negative_on_reals(q, options.poly_tol);
  if (!negative) {
    return witness_search(branch, q, a_p, conic, index,
                          "deflated polynomial is not strictly negative");
  }
  BranchCertificate cert;
  cert.kind = branch.kind;
  cert.branch = branch;
  cert.numerator = z;
  cert.deflated = q;
  cert.origin_params = branch.origin_params;
  cert.deflated_real_roots =
      q.degree() > 0 ? sturm_real_root_count(q, -kInf, kInf, options.poly_tol) : 0;
  cert.deflated_at_zero = q(0.0);
  return cert;
}

}  // namespace

LyapunovForms build_Ap_Np(const BilinearSystem2D& sys, const Mat2& P) {
  return {lyapunov_form(sys.A, P), lyapunov_form(sys.N, P)};
}

std::string_view to_string(ConicClass c) {
  switch (c) {
    case ConicClass::kEllipseLike: return "EllipseLike";
    case ConicClass::kHyperbolaLike: return "HyperbolaLike";
    case ConicClass::kParabolaOrLines: return "ParabolaOrLines";
    case ConicClass::kSingleLine: return "SingleLine";
    case ConicClass::kWholePlane: return "WholePlane";
    case ConicClass::kEmptyOrOriginOnly: return "EmptyOrOriginOnly";
  }
  return "Unknown";
}

std::string_view to_string(BranchKind k) {
  switch (k) {
    case BranchKind::kEllipse: return "ellipse";
    case BranchKind::kHyperbola: return "hyperbola";
    case BranchKind::kParabola: return "parabola";
    case BranchKind::kLine: return "line";
  }
  return "unknown";
}

double ConicDescription::q_magnitude(Vec2 x) const {
  return quad_form_magnitude(N_p, x) + 2.0 * (std::fabs(x.v1 * c.v1) + std::fabs(x.v2 * c.v2));
}

ConicDescription describe_conic(const Mat2& N_p, Vec2 c, double tol) {
  ConicDescription conic{N_p, c, ConicClass::kWholePlane};
  const bool c_zero = c.v1 == 0.0 && c.v2 == 0.0;
  switch (classify_definiteness(N_p, tol)) {
    case Definiteness::kPositiveDefinite:
    case Definiteness::kNegativeDefinite:
      conic.classification = c_zero ? ConicClass::kEmptyOrOriginOnly : ConicClass::kEllipseLike;
      break;
    case Definiteness::kIndefinite:
      conic.classification = ConicClass::kHyperbolaLike;
      break;
    case Definiteness::kPositiveSemidefinite:
    case Definiteness::kNegativeSemidefinite:
      conic.classification = ConicClass::kParabolaOrLines;
      break;
    case Definiteness::kZero:
      conic.classification = c_zero ? ConicClass::kWholePlane : ConicClass::kSingleLine;
      break;
  }
  return conic;
}

CircleTransform transform_to_circle(const Mat2& N_p, Vec2 c, double tol) {
  CircleTransform ct;
  ct.L = cholesky_upper(N_p, tol);
  const Mat2 l_inv = inverse(ct.L);
  ct.y0 = -(l_inv.transpose() * c);
  ct.a = dot(ct.y0, ct.y0);
  if (ct.a == 0.0) return ct;
  const double root = std::sqrt(ct.a);
  // Pick the traversal direction that keeps the origin's angle within
  // ±90 degrees of t = 0, so |t0| <= 1.
  ct.orientation = ct.y0.v1 <= 0.0 ? 1.0 : -1.0;
  const Vec2 dir = (-ct.orientation / root) * ct.y0;  // (cos θ0, sin θ0)
  ct.t0 = dir.v2 / (1.0 + dir.v1);
  return ct;
}

Vec2 Branch::point(double t) const {
  const double d = denominator(t);
  return {x1(t) / d, x2(t) / d};
}

Parametrization parametrize_branches(const ConicDescription& conic, double tol) {
  Parametrization out;
  switch (conic.classification) {
    case ConicClass::kEmptyOrOriginOnly:
      return out;
    case ConicClass::kWholePlane:
      throw Error(ErrorKind::kInvalidArgument, "the whole plane has no branch parametrization");
    case ConicClass::kEllipseLike: {
      const bool negative = classify_definiteness(conic.N_p, tol) == Definiteness::kNegativeDefinite;
      out = negative ? parametrize_ellipse(-conic.N_p, -conic.c, tol)
                     : parametrize_ellipse(conic.N_p, conic.c, tol);
      break;
    }
    case ConicClass::kHyperbolaLike:
      out = parametrize_hyperbola(conic.N_p, conic.c);
      break;
    case ConicClass::kParabolaOrLines:
      out = parametrize_rank_one(conic.N_p, conic.c, classify_definiteness(conic.N_p, tol));
      break;
    case ConicClass::kSingleLine: {
      const Vec2 d = kJ * conic.c;
      out.branches.push_back(make_branch(BranchKind::kLine,
                                         {Polynomial{0.0, d.v1}, Polynomial{0.0, d.v2}},
                                         Polynomial::constant(1.0), false, {0.0}));
      break;
    }
  }
  for (const Branch& b : out.branches) check_origin_params(b);
  return out;
}

Polynomial restrict_quadratic_form(const Mat2& form, const Branch& branch) {
  return form.m11 * (branch.x1 * branch.x1) + (form.m12 + form.m21) * (branch.x1 * branch.x2) +
         form.m22 * (branch.x2 * branch.x2);
}

VerificationOutcome verify_clf(const BilinearSystem2D& sys, const Mat2& P,
                               const VerifyOptions& options) {
  if (classify_definiteness(P, options.definiteness_tol) != Definiteness::kPositiveDefinite) {
    throw Error(ErrorKind::kNotPositiveDefinite, "P must be symmetric positive definite");
  }
  const LyapunovForms forms = build_Ap_Np(sys, P);
  const ConicDescription conic = describe_conic(forms.N_p, P * sys.b, options.definiteness_tol);

  if (conic.classification == ConicClass::kWholePlane) {
    if (classify_definiteness(forms.A_p, options.definiteness_tol) ==
        Definiteness::kNegativeDefinite) {
      return {Certificate{conic.classification, false, {}, {}, {}}};
    }
    const SymmetricEigen eig = symmetric_eigen(forms.A_p);
    return {make_violation(conic, forms.A_p, eig.larger_vector, -1,
                           "A_p is not negative definite on the whole plane")};
  }
  if (conic.classification == ConicClass::kEmptyOrOriginOnly) {
    return {Certificate{conic.classification, true, {}, {}, {}}};
  }

  const Parametrization param = parametrize_branches(conic, options.definiteness_tol);
  Certificate cert;
  cert.classification = conic.classification;
  for (size_t i = 0; i < param.branches.size(); ++i) {
    auto res = analyze_branch(param.branches[i], forms.A_p, conic, options, static_cast<int>(i));
    if (auto* v = std::get_if<Violation>(&res)) return {std::move(*v)};
    cert.branches.push_back(std::move(std::get<BranchCertificate>(res)));
  }
  for (const Vec2& m : param.missed_points) {
    if (m.v1 == 0.0 && m.v2 == 0.0) continue;
    const double y = quad_form(forms.A_p, m);
    if (!(y < 0.0)) {
      return {make_violation(conic, forms.A_p, m, -1, "Y is not negative at a missed point")};
    }
    cert.missed_points.push_back(m);
    cert.missed_point_values.push_back(y);
  }
  return {std::move(cert)};
}

}  // namespace clf2d
