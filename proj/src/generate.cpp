#include "lpdo/generate.hpp"

#include "lpdo/ops.hpp"

namespace lpdo {

int Generator::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

int Generator::nonzero(int lo, int hi) {
  for (;;) {
    const int v = integer(lo, hi);
    if (v != 0) return v;
  }
}

Expr Generator::poly(int max_degree, int bound) {
  Expr r;
  for (int d = 0; d <= max_degree; ++d)
    for (int i = 0; i <= d; ++i) {
      const int c = integer(-bound, bound);
      if (c != 0) r += Expr(c) * pow(var_x(), i) * pow(var_y(), d - i);
    }
  return r;
}

Lpdo Generator::first_order() {
  const int alpha = nonzero(-3, 3);
  return Lpdo::term(1, 0, Expr(alpha)) + Lpdo::term(0, 1, poly()) + Lpdo(poly());
}

Lpdo Generator::second_order() {
  Lpdo r;
  for (int j = 0; j <= 2; ++j)
    for (int k = 0; j + k <= 2; ++k) r = r + Lpdo::term(j, k, poly());
  return r;
}

Lpdo Generator::hyperbolic() { return Lpdo::term(1, 1, Expr(1)) + Lpdo::term(1, 0, poly()) + Lpdo::term(0, 1, poly()) + Lpdo(poly()); }

Expr left_root(const Lpdo& first) { return -first.coeff(0, 1) / first.coeff(1, 0); }

}  // namespace lpdo
