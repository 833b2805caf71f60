#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpdo/lpdo.hpp"

namespace lpdo {

/// A = (Dx - w*Dy + p3)(p4*Dx + p5*Dy + p6) - l2.
///
/// The remainder is oriented as l2 = (product) - A, so l2 is the zero-order
/// coefficient of the product minus a00: l2 = L(p6) + p3*p6 - a00 with
/// L = Dx - w*Dy.
struct Factorization2 {
  Expr omega;
  std::array<Expr, 6> p;
  Expr l2;
  bool exact = false;

  Lpdo left() const;
  Lpdo right() const;
};

/// A = (Dx - w*Dy + p3)(p4*Dx^2 + p5*Dx*Dy + p6*Dy^2 + p7*Dx + p8*Dy + p9)
///     - l3*Dy - l31.
struct Factorization3 {
  Expr omega;
  std::array<Expr, 9> p;
  Expr l3;
  Expr l31;
  bool exact = false;

  Lpdo left() const;
  Lpdo right() const;
};

/// Requires order 2, P(w) = 0 and P'(w) != 0 (tested with zt). a20 may
/// vanish as long as the root is simple.
Factorization2 factor2(const Lpdo& a, const Expr& omega, const ZeroTest& zt = ZeroTest::from_env());
Factorization3 factor3(const Lpdo& a, const Expr& omega, const ZeroTest& zt = ZeroTest::from_env());

using FactorPair = std::pair<Lpdo, Lpdo>;

/// X^2 - Y^2 + a10*X + a01*Y + a00 with constant coefficients, X = Dx,
/// Y = Dy. Factorizable iff a00 = (a10^2 - a01^2)/4, as
/// (X + Y + (a10 - a01)/2)(X - Y + (a10 + a01)/2).
std::optional<FactorPair> const_factor_condition2(const mpq_class& a10, const mpq_class& a01,
                                                  const mpq_class& a00);

/// X^2*Y + X*Y^2 + a20*X^2 + a11*X*Y + a02*Y^2 + a10*X + a01*Y + a00 split as
/// (X + Y + g)(quadratic), g = a11 - a20 - a02. The historical conditions
///   a01 = a10 + (a20 + 1)*g,  a00 = g*(a10 + a20*g)
/// with factors (X + Y + g)(X*Y - a20*X + (a20 - a11 + g)*Y + a10 + a20*g)
/// are tried first and kept only if they expand back to the input; the
/// conditions that do hold for this shape are
///   a01 = a10 + (a02 - a20)*g,  a00 = g*(a10 - a20*g)
/// with factors (X + Y + g)(X*Y + a20*X + a02*Y + a10 - a20*g).
/// Throws PaperFormulaMismatch when the historical conditions hold, their
/// factors fail to expand to the input and no valid split exists.
std::optional<FactorPair> const_factor_condition3(const mpq_class& a20, const mpq_class& a11,
                                                  const mpq_class& a02, const mpq_class& a10,
                                                  const mpq_class& a01, const mpq_class& a00);

struct LinearInvariants {
  Expr l21;
  Expr l32;
  Expr l31;
};

/// For Dx*Dy*Dt + ... with Dt = Dx + Dy and a2 = a20, a1 = a02,
/// a3 = a11 - a1 - a2:
///   l21 = a2_x - a1_y, l32 = a3_y - a2_t, l31 = a3_x - a1_t.
LinearInvariants linear_invariants(const Expr& a1, const Expr& a2, const Expr& a3);

/// phi with phi_x = a1, phi_y = a2 when l21 = 0 and a3 = a1 + a2.
std::optional<Expr> find_gauge_to_product_form(const Expr& a1, const Expr& a2, const Expr& a3,
                                               const ZeroTest& zt = ZeroTest::from_env());

struct HierarchyEntry {
  struct Second {
    Expr omega;
    Expr l2;
  };
  Expr omega;
  Expr l3;
  Expr l31;
  std::vector<Second> second;
};

struct InvariantSet {
  int order = 0;
  std::vector<Factorization2> order2;  // order-2 input: one entry per simple root
  std::vector<HierarchyEntry> order3;
  std::optional<LinearInvariants> linear;

  std::size_t count() const;
};

/// Remainder invariants for every simple rational root; for order 3 also the
/// l2 invariants of each second-order right factor.
InvariantSet invariant_hierarchy(const Lpdo& a, const ZeroTest& zt = ZeroTest::from_env());

struct Check {
  std::string name;
  bool passed = false;
  Expr residual;
};

struct Report {
  std::vector<Check> checks;
  bool passed() const;
};

/// Compares remainders of A and of gauge_conjugate(A, phi) at the same root:
/// l2 and l3 are invariant, l31 shifts by l3*phi_y.
Report verify_gauge_invariance(const Lpdo& a, const Expr& phi, const Expr& omega,
                               const ZeroTest& zt = ZeroTest::from_env());

}  // namespace lpdo
