#pragma once

// Internal term-level view of canonical expressions. Every Expr that is not
// an Add is a single term c * prod(base^k) * exp(e); an Add is a sorted list
// of such terms with pairwise distinct monomials.

#include <map>
#include <utility>
#include <vector>

#include "lpdo/expr.hpp"

namespace lpdo {

struct Node {
  Kind kind = Kind::Num;
  std::size_t hash = 0;
  mpq_class q;  // Num value, Mul coefficient
  std::string name;  // Sym
  FuncSymbol fn;  // Fun
  long n = 0;  // Pow exponent
  std::vector<Expr> ops;  // Log/Exp/Pow: one child; Mul factors; Add terms
};

namespace detail {

struct Mono {
  std::vector<std::pair<Expr, long>> f;  // sorted by base, no zero exponents
  Expr e;  // exponent of the exp factor, 0 when absent
};

struct Term {
  mpq_class c;
  Mono m;
};

using Sum = std::vector<Term>;

long degree(const Mono& m);
int mono_cmp(const Mono& a, const Mono& b);
struct MonoLess {
  bool operator()(const Mono& a, const Mono& b) const { return mono_cmp(a, b) < 0; }
};

Mono mono_mul(const Mono& a, const Mono& b);
Mono mono_pow(const Mono& m, long n);
bool mono_is_one(const Mono& m);

Term term_of(const Expr& e);  // e must not be an Add
Sum terms_of(const Expr& e);
Expr build(const Term& t);
Expr build(const Sum& s);

Sum materialize(const Term& t);
Sum sum_mul(const Sum& a, const Sum& b);

class SumBuilder {
 public:
  void add(const Term& t);
  void add(const Sum& s) {
    for (const auto& t : s) add(t);
  }
  Sum take();

 private:
  std::map<Mono, mpq_class, MonoLess> acc_;
};

/// value(D) = c * m * core with core a canonical monic Add (or 1).
struct Denominator {
  mpq_class c = 1;
  Mono m;
  Expr core = Expr(1);
};
Denominator split_denominator(const Sum& d);

// Raw node constructors: no simplification, caller guarantees canonicity.
Expr make_log(const Expr& arg);
Expr make_exp(const Expr& arg);

}  // namespace detail
}  // namespace lpdo
