#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lpdo/error.hpp"

namespace lpdo {

enum class Var { x, y };

/// An opaque coefficient function, possibly differentiated. The pair (dx, dy)
/// is the whole derivative record, so mixed partials commute by construction.
struct FuncSymbol {
  std::string name;
  int dx = 0;
  int dy = 0;
  bool on_x = true;
  bool on_y = true;

  bool depends_on(Var v) const { return v == Var::x ? on_x : on_y; }
  bool operator==(const FuncSymbol&) const = default;
};

// Rank order of node kinds; also the first key of the structural total order.
enum class Kind : std::uint8_t { Num, Sym, Fun, Log, Exp, Pow, Mul, Add };

struct Node;

/// Immutable, always-canonical symbolic expression.
///
/// Sums are fully expanded. A product is a rational coefficient times factors
/// sorted by base, with at most one exp factor. Integer powers of sums only
/// occur with negative exponent; such denominators are kept monic with no
/// common monomial or rational content.
class Expr {
 public:
  Expr();
  Expr(int v);
  Expr(long v);
  Expr(const mpq_class& q);

  static Expr symbol(const std::string& name);
  static Expr function(const FuncSymbol& f);
  static Expr function(const std::string& name, bool on_x = true, bool on_y = true);
  static Expr var(Var v);

  Kind kind() const;
  std::size_t hash() const;

  bool is_num() const { return kind() == Kind::Num; }
  bool is_num(long v) const;
  bool is_atom() const;

  const mpq_class& value() const;  // Num
  const std::string& name() const;  // Sym
  const FuncSymbol& func() const;  // Fun
  const Expr& arg() const;  // Log, Exp argument; Pow base
  long exponent() const;  // Pow
  const mpq_class& coef() const;  // Mul
  const std::vector<Expr>& operands() const;  // Mul factors, Add terms

  std::string str() const;

  const Node* id() const { return p_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  std::shared_ptr<const Node> p_;

  friend struct NodeFactory;
};

/// Three-way structural comparison; the total order used everywhere.
int compare(const Expr& a, const Expr& b);

inline bool operator==(const Expr& a, const Expr& b) {
  return a.id() == b.id() || (a.hash() == b.hash() && compare(a, b) == 0);
}
inline bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, long n);
Expr inverse(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);

std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Normalization regimes.
///  standard: the canonical form every Expr already carries.
///  formal:   additionally log(u*v) -> log u + log v, log(exp s) -> s and
///            exp(n*log u + s) -> u^n * exp(s) for integer n.
///  rational: one fraction over the atoms of the expression; the
///            denominator is a product of integral polynomial factors,
///            refined by exact division, and the numerator is cancelled
///            against each of them.
///            Zero is always detected; other results need not be unique.
enum class Mode { standard, formal, rational };

Expr normalize(const Expr& e, Mode mode = Mode::standard);
Expr formal(const Expr& e);
Expr rational(const Expr& e);

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

}  // namespace lpdo
