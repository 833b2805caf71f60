#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace lpdo {

/// Sparse multivariate polynomial over Q in a fixed number of variables,
/// terms kept in descending lexicographic order of exponent vectors.
class Poly {
 public:
  using Exps = std::vector<int>;
  using Terms = std::map<Exps, mpq_class, std::greater<Exps>>;

  explicit Poly(int nvars = 0) : n_(nvars) {}
  static Poly constant(int nvars, const mpq_class& c);
  static Poly variable(int nvars, int i);

  int nvars() const { return n_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  const Terms& terms() const { return t_; }

  const Exps& leading_monomial() const { return t_.begin()->first; }
  const mpq_class& leading_coefficient() const { return t_.begin()->second; }

  int degree(int v) const;
  /// Coefficient of v^d as a polynomial in the remaining variables.
  Poly coeff(int v, int d) const;

  void add_term(const Exps& e, const mpq_class& c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const mpq_class& c) const;
  Poly pow(unsigned k) const;
  bool operator==(const Poly& o) const { return n_ == o.n_ && t_ == o.t_; }

  Poly monic() const;

  /// Exact quotient a / b, or nothing when b does not divide a.
  static std::optional<Poly> divide(const Poly& a, const Poly& b);

 private:
  int n_;
  Terms t_;
};

/// Pseudo-remainder of a by b viewed as polynomials in variable v.
Poly prem(const Poly& a, const Poly& b, int v);
/// Gcd of the coefficients of p viewed as a polynomial in v.
Poly content(const Poly& p, int v);
/// Monic greatest common divisor, by recursive primitive remainder sequences.
Poly gcd(const Poly& a, const Poly& b);

}  // namespace lpdo
