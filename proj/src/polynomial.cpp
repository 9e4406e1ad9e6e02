#include "clf2d/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "clf2d/errors.hpp"

namespace clf2d {
namespace {

// Zeroes coefficients that are negligible against `scale`, then rebuilds
// (which trims the now-zero leading terms).
Polynomial cleaned(const Polynomial& p, double scale, double rel_tol) {
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  const double cutoff = rel_tol * scale;
  for (double& x : c) {
    if (std::fabs(x) <= cutoff) x = 0.0;
  }
  return Polynomial(std::move(c));
}

Polynomial normalized(const Polynomial& p) {
  const double m = p.max_abs_coeff();
  return m > 0.0 ? p.scaled(1.0 / m) : p;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

int sign_at(const Polynomial& p, double t) {
  if (t == kInf) return sign_of(p.leading());
  if (t == -kInf) return (p.degree() % 2 == 0 ? 1 : -1) * sign_of(p.leading());
  return sign_of(p(t));
}

int sign_variations(const std::vector<Polynomial>& chain, double t) {
  int count = 0;
  int last = 0;
  for (const Polynomial& s : chain) {
    const int sg = sign_at(s, t);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++count;
    last = sg;
  }
  return count;
}

double refine_root(const Polynomial& p, double lo, double hi) {
  int s_lo = sign_of(p(lo));
  if (sign_of(p(hi)) == 0) return hi;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int s_mid = sign_of(p(mid));
    if (s_mid == 0) return mid;
    if (s_mid == s_lo) {
      lo = mid;
      s_lo = s_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void isolate(const Polynomial& p, const std::vector<Polynomial>& chain, double lo, double hi,
             int count, int depth, std::vector<double>& out) {
  if (count <= 0) return;
  if (count == 1) {
    out.push_back(refine_root(p, lo, hi));
    return;
  }
  const double mid = 0.5 * (lo + hi);
  if (depth > 200 || mid <= lo || mid >= hi) {
    // Unresolvable cluster; report it once.
    out.push_back(mid);
    return;
  }
  const int left = sign_variations(chain, lo) - sign_variations(chain, mid);
  isolate(p, chain, lo, mid, left, depth + 1, out);
  isolate(p, chain, mid, hi, count - left, depth + 1, out);
}

}  // namespace

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Polynomial::magnitude_at(double t) const {
  const double at = std::fabs(t);
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + std::fabs(*it);
  return acc;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::fabs(c));
  return m;
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::trimmed(double rel_tol) const {
  const double cutoff = rel_tol * max_abs_coeff();
  std::vector<double> c = coeffs_;
  while (c.size() > 1 && std::fabs(c.back()) <= cutoff) c.pop_back();
  if (c.size() == 1 && std::fabs(c[0]) <= cutoff) c[0] = 0.0;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(double s) const {
  std::vector<double> c = coeffs_;
  for (double& x : c) x *= s;
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(static_cast<size_t>(std::max(a.degree(), b.degree()) + 1), 0.0);
  for (int i = 0; i <= a.degree(); ++i) c[static_cast<size_t>(i)] += a[i];
  for (int i = 0; i <= b.degree(); ++i) c[static_cast<size_t>(i)] += b[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(static_cast<size_t>(a.degree() + b.degree() + 1), 0.0);
  for (int i = 0; i <= a.degree(); ++i) {
    for (int j = 0; j <= b.degree(); ++j) c[static_cast<size_t>(i + j)] += a[i] * b[j];
  }
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw Error(ErrorKind::kInvalidArgument, "polynomial division by zero");
  const int n = num.degree();
  const int d = den.degree();
  if (n < d) return {Polynomial{}, num};
  std::vector<double> rem(num.coeffs().begin(), num.coeffs().end());
  std::vector<double> quot(static_cast<size_t>(n - d + 1), 0.0);
  const double lead = den.leading();
  for (int k = n - d; k >= 0; --k) {
    const double q = rem[static_cast<size_t>(k + d)] / lead;
    quot[static_cast<size_t>(k)] = q;
    for (int j = 0; j <= d; ++j) rem[static_cast<size_t>(k + j)] -= q * den[j];
    rem[static_cast<size_t>(k + d)] = 0.0;
  }
  rem.resize(static_cast<size_t>(std::max(d, 1)));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b, double rel_tol) {
  Polynomial x = normalized(a);
  Polynomial y = normalized(b);
  if (y.is_zero()) return x.is_zero() ? x : x.scaled(1.0 / x.leading());
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    Polynomial r = cleaned(divmod(x, y).second, std::max(x.max_abs_coeff(), 1.0), rel_tol);
    x = y;
    y = normalized(r);
  }
  return x.scaled(1.0 / x.leading());
}

Polynomial square_free_part(const Polynomial& p, double rel_tol) {
  if (p.degree() <= 1) return p;
  const Polynomial g = gcd(p, p.derivative(), rel_tol);
  if (g.degree() == 0) return p;
  return divmod(p, g).first;
}

std::vector<Polynomial> sturm_sequence(const Polynomial& p, double rel_tol) {
  std::vector<Polynomial> chain;
  if (p.is_zero()) return chain;
  chain.push_back(normalized(p));
  if (p.degree() == 0) return chain;
  chain.push_back(normalized(p.derivative()));
  while (chain.back().degree() > 0) {
    const Polynomial& prev = chain[chain.size() - 2];
    const Polynomial& cur = chain.back();
    Polynomial r = cleaned(divmod(prev, cur).second, prev.max_abs_coeff(), rel_tol);
    if (r.is_zero()) break;
    chain.push_back(normalized(r.scaled(-1.0)));
  }
  return chain;
}

int sturm_real_root_count(const Polynomial& p, double lo, double hi, double rel_tol) {
  if (p.is_zero() || p.degree() == 0) return 0;
  const auto chain = sturm_sequence(square_free_part(p, rel_tol), rel_tol);
  return sign_variations(chain, lo) - sign_variations(chain, hi);
}

double cauchy_root_bound(const Polynomial& p) {
  if (p.degree() <= 0) return 0.0;
  double m = 0.0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, std::fabs(p[i] / p.leading()));
  return 1.0 + m;
}

std::vector<double> real_roots(const Polynomial& p, double rel_tol) {
  std::vector<double> out;
  if (p.is_zero() || p.degree() == 0) return out;
  const Polynomial sf = square_free_part(p, rel_tol);
  if (sf.degree() == 0) return out;
  const auto chain = sturm_sequence(sf, rel_tol);
  const double bound = cauchy_root_bound(sf) + 1.0;
  const int total = sign_variations(chain, -bound) - sign_variations(chain, bound);
  isolate(sf, chain, -bound, bound, total, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool strictly_negative_on_reals(const Polynomial& p, double rel_tol) {
  if (p.is_zero()) return false;
  if (p.degree() % 2 != 0 || !(p.leading() < 0.0)) return false;
  if (p.degree() > 0 && sturm_real_root_count(p, -kInf, kInf, rel_tol) != 0) return false;
  return p(0.0) < 0.0;
}

bool strictly_negative_off_zero(const Polynomial& p, double rel_tol) {
  if (p.is_zero()) return false;
  if (p.degree() % 2 != 0 || !(p.leading() < 0.0)) return false;
  if (p.degree() > 0) {
    int roots = sturm_real_root_count(p, -kInf, kInf, rel_tol);
    if (p(0.0) == 0.0) --roots;
    if (roots != 0) return false;
  }
  return p(-1.0) < 0.0 && p(1.0) < 0.0;
}

std::pair<Polynomial, double> synthetic_divide(const Polynomial& p, double t0) {
  const int n = p.degree();
  if (n == 0) return {Polynomial{}, p[0]};
  std::vector<double> q(static_cast<size_t>(n), 0.0);
  double carry = p[n];
  for (int k = n - 1; k >= 0; --k) {
    q[static_cast<size_t>(k)] = carry;
    carry = p[k] + carry * t0;
  }
  return {Polynomial(std::move(q)), carry};
}

Polynomial deflate_double_root(const Polynomial& p, double t0, double tol) {
  if (p.degree() < 2) {
    throw Error(ErrorKind::kNotADoubleRoot, "polynomial of degree < 2 has no double root");
  }
  const auto [q1, r1] = synthetic_divide(p, t0);
  const auto [q2, r2] = synthetic_divide(q1, t0);
  const double scale = std::max({p.max_abs_coeff(), p.magnitude_at(t0), q1.max_abs_coeff(),
                                 q1.magnitude_at(t0)});
  if (std::fabs(r1) > tol * scale || std::fabs(r2) > tol * scale) {
    throw Error(ErrorKind::kNotADoubleRoot, "t0 is not a double root");
  }
  return q2;
}

}  // namespace clf2d
