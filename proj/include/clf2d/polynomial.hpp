#pragma once

// Dense univariate polynomials with real coefficients, Sturm sequences and
// the sign tests used for certification.

#include <initializer_list>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace clf2d {

class Polynomial {
 public:
  /// The zero polynomial.
  Polynomial() : coeffs_{0.0} {}
  /// Coefficients in ascending degree. Trailing zeros are dropped.
  explicit Polynomial(std::vector<double> ascending);
  Polynomial(std::initializer_list<double> ascending)
      : Polynomial(std::vector<double>(ascending)) {}

  static Polynomial constant(double c) { return Polynomial({c}); }
  /// t - root
  static Polynomial linear_factor(double root) { return Polynomial({-root, 1.0}); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  double leading() const { return coeffs_.back(); }
  double operator[](int i) const {
    return i >= 0 && i <= degree() ? coeffs_[static_cast<size_t>(i)] : 0.0;
  }
  std::span<const double> coeffs() const { return coeffs_; }

  double operator()(double t) const;
  /// Σ |c_i| |t|^i
  double magnitude_at(double t) const;
  double max_abs_coeff() const;

  Polynomial derivative() const;
  /// Leading coefficients with |c| <= rel_tol * max|c| are dropped.
  Polynomial trimmed(double rel_tol) const;
  Polynomial scaled(double s) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& a) { return a.scaled(s); }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Polynomial long division; throws Error(kInvalidArgument) on a zero divisor.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den);

inline constexpr double kDefaultPolyTol = 1e-10;

/// Monic-normalized Euclidean gcd. Remainders that are small relative to the
/// dividend (rel_tol) count as zero.
Polynomial gcd(const Polynomial& a, const Polynomial& b, double rel_tol = kDefaultPolyTol);

/// p / gcd(p, p').
Polynomial square_free_part(const Polynomial& p, double rel_tol = kDefaultPolyTol);

/// Canonical Sturm chain p, p', -rem(...), ... of the given polynomial.
std::vector<Polynomial> sturm_sequence(const Polynomial& p, double rel_tol = kDefaultPolyTol);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Number of distinct real roots in (lo, hi]; lo and hi may be infinite.
/// Returns 0 for the zero polynomial.
int sturm_real_root_count(const Polynomial& p, double lo, double hi,
                          double rel_tol = kDefaultPolyTol);

/// Distinct real roots in ascending order, isolated by Sturm bisection and
/// refined to roughly machine precision.
std::vector<double> real_roots(const Polynomial& p, double rel_tol = kDefaultPolyTol);

/// Every root lies in [-bound, bound].
double cauchy_root_bound(const Polynomial& p);

/// True iff p(t) < 0 for every real t. The zero polynomial is not strictly
/// negative.
bool strictly_negative_on_reals(const Polynomial& p, double rel_tol = kDefaultPolyTol);

/// As above but on the reals with t = 0 removed.
bool strictly_negative_off_zero(const Polynomial& p, double rel_tol = kDefaultPolyTol);

inline constexpr double kDefaultDeflationTol = 1e-8;

/// Divides p by (t - t0)^2 through two synthetic divisions. Throws
/// Error(kNotADoubleRoot) if either remainder exceeds tol times the
/// magnitude of p near t0.
Polynomial deflate_double_root(const Polynomial& p, double t0,
                               double tol = kDefaultDeflationTol);

/// Synthetic division by (t - t0); returns {quotient, remainder}.
std::pair<Polynomial, double> synthetic_divide(const Polynomial& p, double t0);

constexpr double quadratic_discriminant(double k2, double k1, double k0) {
  return k1 * k1 - 4.0 * k0 * k2;
}

}  // namespace clf2d
