#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace lpdo;
using namespace lpdo::test;

namespace {

// Test function with every jet independent: a generic psi(x,y).
Expr psi() { return Expr::function("psi"); }

Lpdo random_operator(Generator& g, int order) {
  Lpdo r;
  for (int j = 0; j <= order; ++j)
    for (int k = 0; j + k <= order; ++k)
      if (g.integer(0, 2) != 0) r = r + Lpdo::term(j, k, g.poly(1, 2));
  return r;
}

}  // namespace

TEST_CASE("compose") {
  const Expr a = Expr::function("a"), b = Expr::function("b");
  const Lpdo dar = (Lpdo::dx() + Lpdo(b)) * (Lpdo::dy() + Lpdo(a));
  CHECK(dar.coeff(1, 1) == Expr(1));
  CHECK(dar.coeff(1, 0) == a);
  CHECK(dar.coeff(0, 1) == b);
  CHECK(dar.coeff(0, 0) == a * b + diff(a, Var::x));
  CHECK(Lpdo::dx() * Lpdo::dy() == Op("Dx*Dy"));
  CHECK(Lpdo::dx() * Op("x*Dy") == Op("x*Dx*Dy + Dy"));
  // the parser's '*' is composition too
  CHECK(Op("Dx*x") == Op("x*Dx + 1"));
  CHECK(Op("(Dx + y)^2") == Op("Dx^2 + 2*y*Dx + y^2"));
}

TEST_CASE("add and scale") {
  CHECK((Lpdo::dx() + (-Lpdo::dx())).is_zero());
  CHECK(scale(Op("Dx*Dy"), Expr(1)) == Op("Dx*Dy"));
  CHECK(Op("Dx*Dy + 2") + Lpdo::dx() == Op("Dx*Dy + Dx + 2"));
  CHECK(scale(Lpdo::dx(), X()) == Op("x*Dx"));
  CHECK(Op("Dx - Dx").order() == -1);
}

TEST_CASE("apply") {
  const Expr X1 = Expr::function("X", true, false);
  CHECK(apply(Op("Dx*(Dy + x)"), X1 * exp(-X() * Y())) == Expr(0));
  CHECK(apply(Op("Dx*Dy + x*Dx + 2"), Expr(1)) == Expr(2));
  CHECK(apply(Op("Dx*Dy"), P("x*y")) == Expr(1));
}

TEST_CASE("char_poly and rational_roots") {
  const CharPoly p = char_poly(Op("Dx^2 - Dy^2 + x*Dy"));
  CHECK(p.str() == "w^2 - 1");
  const auto r = rational_roots(p);
  REQUIRE(r.size() == 2);
  CHECK(r[0].value == Expr(-1));
  CHECK(r[1].value == Expr(1));
  CHECK(r[0].simple());
  CHECK(rational_roots(char_poly(Op("Dx^2 + Dy^2"))).empty());

  const CharPoly p3 = char_poly(Op("Dx^2*Dy + Dx*Dy^2 + a(x,y)*Dx*Dy"));
  CHECK(p3.str() == "w^2 + w");
  const auto r3 = rational_roots(p3);
  REQUIRE(r3.size() == 2);
  CHECK(r3[0].value == Expr(-1));
  CHECK(r3[1].value == Expr(0));
  for (const auto& root : r3) CHECK_FALSE(p3.derivative_at(root.value).is_num(0));

  const auto r0 = rational_roots(char_poly(Op("Dx^2 + Dy")));
  REQUIRE(r0.size() == 1);
  CHECK(r0[0].value == Expr(0));
  CHECK(r0[0].multiplicity == 2);

  CHECK(rational_roots(char_poly(Op("6*Dx^2 - 5*Dx*Dy + Dy^2"))).size() == 2);  // 1/2 and 1/3

  try {
    rational_roots(char_poly(Op("x*Dx^2 - Dy^2")));
    FAIL("expected NonConstantCoefficients");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonConstantCoefficients);
  }
  CHECK_THROWS_AS(char_poly(Op("Dx^4")), Error);
  CHECK_THROWS_AS(char_poly(Op("Dx + 1")), Error);
}

TEST_CASE("gauge_conjugate") {
  const Lpdo l = Op("Dx*Dy + x*Dx + 2");
  CHECK(gauge_conjugate(l, Expr(0)) == l);
  const Lpdo g = gauge_conjugate(Op("Dx*Dy + x*Dx"), P("-x*y"));
  CHECK(g.coeff(1, 0).is_num(0));
  // hyperbolic transformation rules with opaque data
  const Expr a = Expr::function("a"), b = Expr::function("b"), c = Expr::function("c"), phi = Expr::function("phi");
  const Lpdo h = Lpdo::term(1, 1, Expr(1)) + Lpdo::term(1, 0, a) + Lpdo::term(0, 1, b) + Lpdo(c);
  const Lpdo t = gauge_conjugate(h, phi);
  const Expr px = diff(phi, Var::x), py = diff(phi, Var::y);
  CHECK(t.coeff(1, 0) == a + py);
  CHECK(t.coeff(0, 1) == b + px);
  CHECK(is_zero(t.coeff(0, 0) - (c + diff(px, Var::y) + px * py + a * px + b * py)));
}

TEST_CASE("reduce_form") {
  const auto [ra, phia] = reduce_form(Op("Dx*Dy + x*Dx + 2"), Kill::a);
  CHECK(phia == P("-x*y"));
  CHECK(ra.coeff(1, 0).is_num(0));
  CHECK(ra == gauge_conjugate(Op("Dx*Dy + x*Dx + 2"), phia));

  const auto [same, zero] = reduce_form(Op("Dx*Dy + y*Dy + 3"), Kill::a);
  CHECK(zero.is_num(0));
  CHECK(same == Op("Dx*Dy + y*Dy + 3"));

  const auto [rb, phib] = reduce_form(Op("Dx*Dy + y*Dy + c(x,y)"), Kill::b);
  CHECK(phib == P("-x*y"));
  CHECK(rb.coeff(0, 1).is_num(0));

  CHECK_THROWS_AS(reduce_form(Op("Dx^2 + Dy"), Kill::a), Error);
  CHECK_THROWS_AS(reduce_form(Op("Dx*Dy + exp(y)*Dx"), Kill::a), Error);
}

TEST_CASE("normalize_leading") {
  const auto [s, ch] = normalize_leading(Op("Dx*Dy"));
  CHECK_FALSE(ch.swapped);
  CHECK(ch.shear == 1);
  CHECK_FALSE(s.coeff(2, 0).is_num(0));
  CHECK(undo_change(s, ch) == Op("Dx*Dy"));

  const auto [u, id] = normalize_leading(Op("Dx^2 - Dy^2"));
  CHECK(id.identity());
  CHECK(u == Op("Dx^2 - Dy^2"));

  const auto [w, sw] = normalize_leading(Op("Dy^2 + Dx"));
  CHECK(sw.swapped);
  CHECK(w == Op("Dx^2 + Dy"));

  try {
    normalize_leading(Op("x*Dx*Dy"));
    FAIL("expected CannotNormalize");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CannotNormalize);
  }
}

TEST_CASE("property: composition is associative and agrees with application") {
  Generator g(7);
  for (int i = 0; i < 60; ++i) {
    const Lpdo a = random_operator(g, 1), b = random_operator(g, 1), c = random_operator(g, 1);
    CHECK(equivalent((a * b) * c, a * (b * c), ZeroTest{}));
    CHECK(is_zero(apply(a * b, psi()) - apply(a, apply(b, psi()))));
  }
  for (int i = 0; i < 30; ++i) {
    const Lpdo a = random_operator(g, 2), b = random_operator(g, 1);
    CHECK(is_zero(apply(a * b, psi()) - apply(a, apply(b, psi()))));
  }
}

TEST_CASE("property: gauge is a conjugation action preserving the principal symbol") {
  Generator g(8);
  for (int i = 0; i < 40; ++i) {
    const Lpdo a = random_operator(g, 3);
    const Expr p1 = g.poly(), p2 = g.poly();
    CHECK(equivalent(gauge_conjugate(gauge_conjugate(a, p1), p2), gauge_conjugate(a, p1 + p2), ZeroTest{}));
    const Lpdo t = gauge_conjugate(a, p1);
    for (const auto& [m, c] : a.coeffs())
      if (m.order() == a.order()) CHECK(t.coeff(m.j, m.k) == c);
    // oracle: e^{-phi} A(e^{phi} psi)
    CHECK(is_zero(apply(t, psi()) - exp(-p1) * apply(a, exp(p1) * psi())));
  }
}

TEST_CASE("property: normalize_leading gives a nonzero leading coefficient") {
  Generator g(9);
  for (int i = 0; i < 60; ++i) {
    const int order = g.integer(2, 3);
    Lpdo a;
    for (int j = 0; j <= order; ++j) a = a + Lpdo::term(j, order - j, Expr(g.integer(-2, 2)));
    if (a.order() != order) continue;
    a = a + Lpdo::term(0, 1, g.poly(1));
    const auto [n, ch] = normalize_leading(a);
    CHECK_FALSE(n.coeff(order, 0).is_num(0));
    CHECK(undo_change(n, ch) == a);
  }
}

TEST_CASE("property: operators print and parse back") {
  Generator g(10);
  for (int i = 0; i < 100; ++i) {
    const Lpdo a = random_operator(g, 3);
    CHECK(parse_operator(a.str()) == a);
  }
  const Lpdo f = Op("Dx^2*Dy + Dx*Dy^2 + a(x,y)*Dx*Dy + c(x,y)");
  CHECK(parse_operator(f.str()) == f);
}
