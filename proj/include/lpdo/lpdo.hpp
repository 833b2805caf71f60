#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lpdo/expr.hpp"
#include "lpdo/zero_test.hpp"

namespace lpdo {

/// Derivative multi-index: dx^j dy^k.
struct MultiIndex {
  int j = 0;
  int k = 0;
  int order() const { return j + k; }
  bool operator==(const MultiIndex&) const = default;
};

// Printing order: higher total order first, then higher x-order first.
struct MultiIndexOrder {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    if (a.order() != b.order()) return a.order() > b.order();
    return a.j > b.j;
  }
};

/// Bivariate linear partial differential operator sum a_jk Dx^j Dy^k.
class Lpdo {
 public:
  using Coeffs = std::map<MultiIndex, Expr, MultiIndexOrder>;

  Lpdo() = default;
  explicit Lpdo(const Expr& scalar);
  static Lpdo term(int j, int k, const Expr& c);
  static Lpdo dx() { return term(1, 0, Expr(1)); }
  static Lpdo dy() { return term(0, 1, Expr(1)); }

  const Coeffs& coeffs() const { return c_; }
  Expr coeff(int j, int k) const;
  Lpdo with(int j, int k, const Expr& c) const;

  /// Maximal j + k over stored coefficients; -1 for the zero operator.
  int order() const;
  bool is_zero() const { return c_.empty(); }
  bool is_scalar() const { return order() <= 0; }

  template <class F>
  Lpdo map(F f) const {
    Lpdo r;
    for (const auto& [m, c] : c_) r.put(m, f(c));
    return r;
  }

  std::string str() const;

 private:
  void put(const MultiIndex& m, const Expr& c);
  Coeffs c_;

  friend Lpdo operator+(const Lpdo& a, const Lpdo& b);
  friend Lpdo compose(const Lpdo& a, const Lpdo& b);
};

Lpdo operator+(const Lpdo& a, const Lpdo& b);
Lpdo operator-(const Lpdo& a);
Lpdo operator-(const Lpdo& a, const Lpdo& b);
/// Left multiplication by a scalar function: s o A.
Lpdo scale(const Lpdo& a, const Expr& s);
/// Left composition A o B by the generalized Leibniz rule.
Lpdo compose(const Lpdo& a, const Lpdo& b);
inline Lpdo operator*(const Lpdo& a, const Lpdo& b) { return compose(a, b); }
Lpdo power(const Lpdo& a, int n);

inline bool operator==(const Lpdo& a, const Lpdo& b) { return a.coeffs() == b.coeffs(); }

Expr apply(const Lpdo& a, const Expr& psi);

/// Coefficient-wise identity test.
bool equivalent(const Lpdo& a, const Lpdo& b, const ZeroTest& zt, Mode mode = Mode::standard);

/// e^{-phi} o A o e^{phi}.
Lpdo gauge_conjugate(const Lpdo& a, const Expr& phi);

Lpdo swap_xy(const Lpdo& a);

/// Characteristic polynomial P(w) = sum_{j+k=n} a_jk w^j, highest degree
/// first with leading zeros stripped.
struct CharPoly {
  std::vector<Expr> c;
  int degree() const { return static_cast<int>(c.size()) - 1; }
  Expr eval(const Expr& w) const;
  Expr derivative_at(const Expr& w) const;
  std::string str() const;
};

CharPoly char_poly(const Lpdo& a);

struct Root {
  Expr value;
  int multiplicity = 1;
  bool simple() const { return multiplicity == 1; }
};

/// All rational roots with multiplicities, in increasing order.
std::vector<Root> rational_roots(const CharPoly& p);

/// Gauge that kills the a (Dx) or b (Dy) coefficient of a normal-form
/// hyperbolic operator Dx*Dy + a*Dx + b*Dy + c.
enum class Kill { a, b };
std::pair<Lpdo, Expr> reduce_form(const Lpdo& op, Kill kill);

/// Change of variables applied by normalize_leading. With a shear l the new
/// coordinates are (x + l*y, y), so Dy becomes l*Dx + Dy and coefficients are
/// rewritten through x -> x - l*y. A swap exchanges x and y first.
struct VariableChange {
  bool swapped = false;
  int shear = 0;
  bool identity() const { return !swapped && shear == 0; }
};

std::pair<Lpdo, VariableChange> normalize_leading(const Lpdo& a, const ZeroTest& zt = ZeroTest::from_env());

/// Inverse of the coordinate change for operators with constant coefficients
/// in the principal part; used to report factors in the original variables.
Lpdo undo_change(const Lpdo& a, const VariableChange& ch);

Lpdo parse_operator(const std::string& text);
Expr parse_expr(const std::string& text);

}  // namespace lpdo
