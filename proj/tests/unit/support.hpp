#pragma once

#include <gmpxx.h>

#include <random>
#include <string>
#include <vector>

#include "lpdo/generate.hpp"
#include "lpdo/lpdo.hpp"
#include "lpdo/ops.hpp"
#include "lpdo/zero_test.hpp"

namespace lpdo::test {

inline Expr X() { return var_x(); }
inline Expr Y() { return var_y(); }
inline Expr P(const std::string& s) { return parse_expr(s); }
inline Lpdo Op(const std::string& s) { return parse_operator(s); }

/// Random expression trees over x, y, a parameter `a` and small integers,
/// closed under + - * and division by shifted linear forms (never zero as a
/// polynomial). Suitable for evaluation with eval_at.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Expr leaf() {
    switch (integer(0, 4)) {
      case 0: return X();
      case 1: return Y();
      case 2: return Expr::symbol("a");
      default: return Expr(integer(-4, 4));
    }
  }

  Expr polynomial(int depth) {
    if (depth == 0) return leaf();
    switch (integer(0, 3)) {
      case 0: return polynomial(depth - 1) + polynomial(depth - 1);
      case 1: return polynomial(depth - 1) - polynomial(depth - 1);
      case 2: return polynomial(depth - 1) * polynomial(depth - 1);
      default: return pow(polynomial(depth - 1), integer(0, 3));
    }
  }

  Expr rational(int depth) {
    if (depth == 0) return leaf();
    switch (integer(0, 4)) {
      case 0: return rational(depth - 1) + rational(depth - 1);
      case 1: return rational(depth - 1) - rational(depth - 1);
      case 2: return rational(depth - 1) * rational(depth - 1);
      case 3: return rational(depth - 1) / denominator();
      default: return polynomial(depth - 1);
    }
  }

  // c1*x + c2*y + c3 with (c1, c2) != (0, 0)
  Expr denominator() {
    int c1 = integer(-2, 2), c2 = integer(-2, 2);
    if (c1 == 0 && c2 == 0) c1 = 1;
    return Expr(c1) * X() + Expr(c2) * Y() + Expr(integer(-3, 3));
  }

  Point point() {
    auto q = [&] { return mpq_class(integer(-997, 997), integer(1, 13)); };
    return {{"x", q()}, {"y", q()}, {"a", q()}};
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Evaluates both sides at random points; points hitting a pole are skipped.
inline bool agree_numerically(const Expr& a, const Expr& b, ExprGen& gen, int points = 6) {
  int used = 0;
  for (int tries = 0; used < points && tries < 50; ++tries) {
    const Point p = gen.point();
    try {
      if (eval_at(a, p) != eval_at(b, p)) return false;
      ++used;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DivisionByZero && e.code() != ErrorCode::PoleError) throw;
    }
  }
  return used > 0;
}

/// Cofactor expansion along the first row; the oracle for both determinant
/// routines.
template <class T, class Get>
T cofactor_det(int n, Get get, std::vector<int> rows = {}, std::vector<int> cols = {}) {
  if (rows.empty()) {
    for (int i = 0; i < n; ++i) {
      rows.push_back(i);
      cols.push_back(i);
    }
  }
  if (rows.size() == 1) return get(rows[0], cols[0]);
  T sum = T(0);
  const std::vector<int> rest(rows.begin() + 1, rows.end());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::vector<int> sub = cols;
    sub.erase(sub.begin() + static_cast<long>(j));
    const T term = get(rows[0], cols[j]) * cofactor_det<T>(n, get, rest, sub);
    sum = (j % 2 == 0) ? T(sum + term) : T(sum - term);
  }
  return sum;
}

}  // namespace lpdo::test
