#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpdo/bkfactor.hpp"
#include "support.hpp"

using namespace lpdo;
using namespace lpdo::test;

namespace {

const ZeroTest zt{};

Expr dx(const Expr& e) { return diff(e, Var::x); }
Expr dy(const Expr& e) { return diff(e, Var::y); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

// The remainder operator is subtracted from the product.
Lpdo recomposed(const Factorization2& f) { return f.left() * f.right() - Lpdo(f.l2); }
Lpdo recomposed(const Factorization3& f) {
  return f.left() * f.right() - Lpdo::term(0, 1, f.l3) - Lpdo(f.l31);
}

Lpdo ex3(const Expr& a11, const Expr& a10, const Expr& a01, const Expr& a00) {
  return Op("Dx^2*Dy + Dx*Dy^2") + Lpdo::term(1, 1, a11) + Lpdo::term(1, 0, a10) + Lpdo::term(0, 1, a01) +
         Lpdo(a00);
}

}  // namespace

TEST_CASE("factor2 structure") {
  const Lpdo a = Op("2*Dx^2 + 3*Dx*Dy + Dy^2 + x*Dx + y*Dy + x*y");  // roots -1, -1/2
  for (const Expr& w : {Expr(-1), Expr(mpq_class(-1, 2))}) {
    const auto f = factor2(a, w, zt);
    CHECK(f.p[0] == Expr(1));
    CHECK(f.p[1] == -w);
    CHECK(f.p[3] == a.coeff(2, 0));
    CHECK(f.p[4] == a.coeff(2, 0) * w + a.coeff(1, 1));
    CHECK(equivalent(recomposed(f), a, zt));
    // l2 is the zero-order coefficient of the product minus a00
    const Lpdo l = Lpdo::term(1, 0, f.p[0]) + Lpdo::term(0, 1, f.p[1]);
    CHECK(is_zero(f.l2 - (apply(l, f.p[5]) + f.p[2] * f.p[5] - a.coeff(0, 0))));
  }
}

TEST_CASE("factor2 on the constant hyperbolic family") {
  // exact split for a00 = (a10^2 - a01^2)/4
  for (int a10 = -2; a10 <= 2; ++a10)
    for (int a01 = -2; a01 <= 2; ++a01) {
      const Lpdo a = Op("Dx^2 - Dy^2") + Lpdo::term(1, 0, Expr(a10)) + Lpdo::term(0, 1, Expr(a01)) +
                     Lpdo(Expr(mpq_class(a10 * a10 - a01 * a01, 4)));
      const auto f = factor2(a, Expr(1), zt);
      CHECK(f.exact);
      CHECK(f.left() * f.right() == a);
    }
  // condition violated: a nonzero remainder
  CHECK_FALSE(factor2(Op("Dx^2 - Dy^2 + Dx + Dy + 5"), Expr(1), zt).exact);
}

TEST_CASE("factor2 remainder with function coefficients at root 1") {
  const Expr a10 = Expr::function("a10"), a01 = Expr::function("a01"), a00 = Expr::function("a00");
  const Lpdo a = Op("Dx^2 - Dy^2") + Lpdo::term(1, 0, a10) + Lpdo::term(0, 1, a01) + Lpdo(a00);
  const Expr h = (a10 - a01) / Expr(2);
  const Expr shown = a00 - (dx(h) - dy(h)) - (a10 * a10 - a01 * a01) / Expr(4);
  // product minus operator: the negative of a00 - L(p6) - p3*p6
  CHECK(is_zero(factor2(a, Expr(1), zt).l2 + shown));
}

TEST_CASE("factor2 recovers composed factors") {
  const Lpdo l = Op("Dx + y*Dy + x"), r = Op("2*Dx - Dy + y");
  const auto f = factor2(l * r, P("-y"), zt);
  CHECK(f.exact);
  CHECK(f.l2.is_num(0));
  CHECK(f.left() == l);
  CHECK(f.right() == r);
}

TEST_CASE("factor2 errors") {
  CHECK(code_of([] { factor2(Op("Dx^2 - Dy^2"), Expr(2), zt); }) == ErrorCode::NotARoot);
  CHECK(code_of([] { factor2(Op("Dx^2 + 2*Dx*Dy + Dy^2"), Expr(-1), zt); }) == ErrorCode::MultipleRoot);
  CHECK(code_of([] { factor2(Op("Dy^2 + Dx"), Expr(0), zt); }) == ErrorCode::LeadingCoefficientZero);
  CHECK(code_of([] { factor2(Op("Dx^3"), Expr(0), zt); }) == ErrorCode::OrderUnsupported);
  // a20 = 0 is fine as long as the root is simple
  const auto f = factor2(Op("Dx*Dy + x*Dx + 1"), Expr(0), zt);
  CHECK(f.exact);
  CHECK(f.left() == Lpdo::dx());
  CHECK(f.right() == Op("Dy + x"));
}

TEST_CASE("factor3 structure") {
  const Lpdo a = Op("Dx^3 - Dx*Dy^2 + y*Dx^2 + x*Dy^2 + Dx + x*y*Dy + 1");  // roots -1, 0, 1
  for (const int w : {-1, 0, 1}) {
    const auto f = factor3(a, Expr(w), zt);
    CHECK(f.p[3] == a.coeff(3, 0));
    CHECK(f.p[4] == a.coeff(3, 0) * Expr(w) + a.coeff(2, 1));
    CHECK(f.p[5] == a.coeff(3, 0) * Expr(w * w) + a.coeff(2, 1) * Expr(w) + a.coeff(1, 2));
    CHECK(equivalent(recomposed(f), a, zt));
  }
}

TEST_CASE("factor3 on the Dx^2*Dy + Dx*Dy^2 pattern") {
  const Expr a11 = Expr::function("a11"), a10 = Expr::function("a10"), a01 = Expr::function("a01"),
             a00 = Expr::function("a00");
  const auto f = factor3(ex3(a11, a10, a01, a00), Expr(0), zt);
  CHECK(f.l3 == dx(a11) - a01);
  CHECK(f.l31 == dx(a10) - a00);
  CHECK(equivalent(recomposed(f), ex3(a11, a10, a01, a00), zt));

  const auto g = factor3(ex3(P("x^2"), P("x^2"), P("2*x"), P("2*x")), Expr(0), zt);
  CHECK(g.exact);
  // a11 must be an x-antiderivative of a01 up to a function of y
  CHECK_FALSE(factor3(ex3(P("x^2 + x"), P("x^2"), P("2*x"), P("2*x")), Expr(0), zt).exact);
  CHECK(factor3(ex3(P("x^2 + y^3"), P("x*y"), P("2*x"), P("y")), Expr(0), zt).exact);
}

TEST_CASE("factor3 recovers composed factors") {
  const Lpdo a = Op("Dx - Dy + x") * Op("Dx*Dy + y*Dx + 1");
  const auto f = factor3(a, Expr(1), zt);
  CHECK(f.exact);
  CHECK(f.left() * f.right() == a);
  CHECK(code_of([&] { factor3(a, Expr(3), zt); }) == ErrorCode::NotARoot);
  CHECK(code_of([] { factor3(Op("Dx^3 + 3*Dx^2*Dy + 3*Dx*Dy^2 + Dy^3"), Expr(-1), zt); }) ==
        ErrorCode::MultipleRoot);
}

TEST_CASE("const_factor_condition2") {
  const auto p = const_factor_condition2(4, 2, 3);
  REQUIRE(p);
  CHECK(p->first == Op("Dx + Dy + 1"));
  CHECK(p->second == Op("Dx - Dy + 3"));
  const auto z = const_factor_condition2(0, 0, 0);
  REQUIRE(z);
  CHECK(z->first * z->second == Op("Dx^2 - Dy^2"));
  CHECK_FALSE(const_factor_condition2(1, 1, 5));
  CHECK_FALSE(factor2(Op("Dx^2 - Dy^2 + Dx + Dy + 5"), Expr(1), zt).exact);
  // a10 = 2, a01 = 4 needs a00 = -3
  CHECK_FALSE(const_factor_condition2(2, 4, 3));
  const auto q = const_factor_condition2(2, 4, -3);
  REQUIRE(q);
  CHECK(q->first * q->second == Op("Dx^2 - Dy^2 + 2*Dx + 4*Dy - 3"));
}

TEST_CASE("const_factor_condition3") {
  const auto p = const_factor_condition3(1, 3, 1, 2, 2, 1);
  REQUIRE(p);
  CHECK(p->first * p->second == Op("Dx^2*Dy + Dx*Dy^2 + Dx^2 + 3*Dx*Dy + Dy^2 + 2*Dx + 2*Dy + 1"));
  // g = 0: both conditions collapse
  const auto d = const_factor_condition3(0, 0, 0, 0, 0, 0);
  REQUIRE(d);
  CHECK(d->first * d->second == Op("Dx^2*Dy + Dx*Dy^2"));
  // a00 condition violated
  CHECK_FALSE(const_factor_condition3(1, 3, 1, 2, 2, 7));
  const Lpdo bad = Op("Dx^2*Dy + Dx*Dy^2 + Dx^2 + 3*Dx*Dy + Dy^2 + 2*Dx + 2*Dy + 7");
  bool any_exact = false;
  for (const auto& r : rational_roots(char_poly(bad)))
    if (r.simple()) any_exact = any_exact || factor3(bad, r.value, zt).exact;
  CHECK_FALSE(any_exact);
  // the historical conditions with a20 = 1, a02 = 0, g = 1 do not expand back
  CHECK(code_of([] { const_factor_condition3(1, 2, 0, 0, 2, 1); }) == ErrorCode::PaperFormulaMismatch);
}

TEST_CASE("linear invariants and the product-form gauge") {
  const Expr phi = P("x^3*y - y^2");
  const auto l = linear_invariants(dx(phi), dy(phi), dx(phi) + dy(phi));
  CHECK(l.l21.is_num(0));
  CHECK(l.l32.is_num(0));
  CHECK(l.l31.is_num(0));
  const auto c = linear_invariants(Expr(2), Expr(-1), Expr(5));
  CHECK((c.l21.is_num(0) && c.l32.is_num(0) && c.l31.is_num(0)));
  CHECK(linear_invariants(Y(), Expr(0), Expr(0)).l21 == Expr(-1));

  const auto g = find_gauge_to_product_form(Y(), X(), X() + Y(), zt);
  REQUIRE(g);
  CHECK(*g == P("x*y"));
  CHECK(find_gauge_to_product_form(Expr(0), Expr(0), Expr(0), zt).value().is_num(0));
  CHECK_FALSE(find_gauge_to_product_form(Y(), Expr(0), Y(), zt));
  const auto h = find_gauge_to_product_form(dx(phi), dy(phi), dx(phi) + dy(phi), zt);
  REQUIRE(h);
  CHECK(dx(*h) == dx(phi));
  CHECK(dy(*h) == dy(phi));
}

TEST_CASE("invariant hierarchy") {
  // principal symbol w*(w + 1)*(w - 1)
  const Lpdo a = Op("Dx*(Dx + Dy)*(Dx - Dy) + x*Dx^2 + y*Dy + 1");
  const auto s = invariant_hierarchy(a, zt);
  CHECK(s.order3.size() == 3);
  std::size_t seconds = 0;
  for (const auto& e : s.order3) seconds += e.second.size();
  CHECK(seconds <= 6);
  CHECK(seconds >= 3);
  CHECK(s.count() == 3 * 2 + seconds);

  const Lpdo b = Op("(Dx + 1)*(Dx + Dy + 2)*(Dx - Dy - 1)");
  const auto t = invariant_hierarchy(b, zt);
  CHECK(t.order3.size() == 3);
  for (const auto& e : t.order3) {
    CHECK(is_zero(e.l3, zt));
    CHECK(is_zero(e.l31, zt));
    CHECK(e.second.size() == 2);
    for (const auto& q : e.second) CHECK(is_zero(q.l2, zt));
  }

  const auto lin = invariant_hierarchy(Op("Dx^2*Dy + Dx*Dy^2 + x*Dx^2 + x*Dy^2 + 2*Dx*Dy"), zt);
  REQUIRE(lin.linear);
  CHECK(lin.linear->l21 == Expr(1));  // a2 = x, a1 = x

  CHECK(code_of([] { invariant_hierarchy(Op("Dx^3 + 3*Dx^2*Dy + 3*Dx*Dy^2 + Dy^3"), zt); }) ==
        ErrorCode::NoSimpleRoots);
  CHECK(invariant_hierarchy(Op("Dx^2 - Dy^2 + x"), zt).order2.size() == 2);
}

TEST_CASE("gauge invariance report") {
  const Lpdo a = Op("Dx^2 - Dy^2 + x*Dx + y^2*Dy + x*y");
  CHECK(verify_gauge_invariance(a, P("x*y"), Expr(1), zt).passed());
  CHECK(verify_gauge_invariance(a, Expr(0), Expr(-1), zt).passed());
  const Lpdo b = ex3(Expr(0), Expr(0), Expr(-1), P("-2*y"));
  const auto f = factor3(b, Expr(0), zt);
  REQUIRE_FALSE(is_zero(f.l3, zt));
  const Expr phi = integrate_poly(rational(-f.l31 / f.l3), Var::y);
  CHECK(is_zero(factor3(gauge_conjugate(b, phi), Expr(0), zt).l31, zt));
  const auto rep = verify_gauge_invariance(b, phi, Expr(0), zt);
  CHECK(rep.passed());
  CHECK(rep.checks.size() == 2);
}

TEST_CASE("order-2 remainders are the Laplace invariants in characteristic coordinates") {
  // With u = x + y, v = x - y: Dx^2 - Dy^2 + a10 Dx + a01 Dy + a00 is 4 times
  // Du Dv + a Du + b Dv + c, a = (a10 + a01)/4, b = (a10 - a01)/4, c = a00/4,
  // and Du = (Dx + Dy)/2, Dv = (Dx - Dy)/2.
  Generator g(31);
  for (int i = 0; i < 20; ++i) {
    const Expr a10 = g.poly(), a01 = g.poly(), a00 = g.poly();
    const Lpdo op = Op("Dx^2 - Dy^2") + Lpdo::term(1, 0, a10) + Lpdo::term(0, 1, a01) + Lpdo(a00);
    const Expr a = (a10 + a01) / Expr(4), b = (a10 - a01) / Expr(4), c = a00 / Expr(4);
    const Expr a_hat = a * b + (dx(a) + dy(a)) / Expr(2) - c;
    const Expr b_hat = a * b + (dx(b) - dy(b)) / Expr(2) - c;
    CHECK(is_zero(factor2(op, Expr(1), zt).l2 - Expr(4) * b_hat, zt));
    CHECK(is_zero(factor2(op, Expr(-1), zt).l2 - Expr(4) * a_hat, zt));
  }
}

// ---- properties

TEST_CASE("property: order-2 recomposition on 200 composed operators") {
  Generator g(2024);
  int structural = 0;
  for (int i = 0; i < 200; ++i) {
    const Lpdo l = g.first_order(), r = g.first_order();
    const Lpdo a = l * r;
    const auto f = factor2(a, left_root(l), zt);
    CHECK(is_zero(f.l2, zt));
    CHECK(f.exact);
    CHECK(equivalent(f.left() * f.right(), a, zt));
    if (f.left() * f.right() == a) ++structural;
    // exact implies no remainder at all
    CHECK(equivalent(recomposed(f), a, zt));
  }
  CHECK(structural >= 190);
}

TEST_CASE("property: order-3 recomposition") {
  Generator g(2025);
  for (int i = 0; i < 60; ++i) {
    const Lpdo l = g.first_order();
    const Lpdo a = l * g.second_order();
    const auto f = factor3(a, left_root(l), zt);
    CHECK(f.exact);
    CHECK(equivalent(f.left() * f.right(), a, zt));
  }
}

TEST_CASE("property: recomposition with remainder for arbitrary operators") {
  Generator g(2026);
  for (int i = 0; i < 25; ++i) {
    const Lpdo l = g.first_order();
    const Lpdo a2 = l * g.first_order() + Lpdo::term(1, 0, g.poly(1)) + Lpdo(g.poly());
    CHECK(equivalent(recomposed(factor2(a2, left_root(l), zt)), a2, zt));
    const Lpdo a3 = l * g.second_order() + Lpdo::term(1, 1, g.poly(1)) + Lpdo(g.poly());
    CHECK(equivalent(recomposed(factor3(a3, left_root(l), zt)), a3, zt));
  }
}

TEST_CASE("property: remainder invariance under gauge") {
  Generator g(2027);
  for (int i = 0; i < 30; ++i) {
    const Lpdo l = g.first_order();
    const Lpdo a2 = l * g.first_order() + Lpdo(g.poly(1));
    CHECK(verify_gauge_invariance(a2, g.poly(), left_root(l), zt).passed());
    const Lpdo a3 = l * g.second_order() + Lpdo::term(0, 1, g.poly(1)) + Lpdo(g.poly(1));
    CHECK(verify_gauge_invariance(a3, g.poly(), left_root(l), zt).passed());
  }
}
