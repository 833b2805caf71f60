#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "lpdo/lpdo.hpp"

namespace lpdo {

/// Dx*Dy + a*Dx + b*Dy + c.
struct HyperbolicOp {
  Expr a;
  Expr b;
  Expr c;

  Lpdo to_lpdo() const;
  /// Throws NotNormalForm unless the operator is Dx*Dy plus lower-order terms.
  static HyperbolicOp from_lpdo(const Lpdo& op);
};

struct LaplaceInvariants {
  Expr a_hat;  // ab + a_x - c
  Expr b_hat;  // ab + b_y - c
};

LaplaceInvariants laplace_invariants(const HyperbolicOp& op);

/// Gauge equivalence: both invariants agree.
bool equivalent(const HyperbolicOp& p, const HyperbolicOp& q, const ZeroTest& zt = ZeroTest::from_env());

/// Expands (Dy + a - (log a_hat)_y)(Dx + b) - a_hat. Throws FactorizableStop
/// when a_hat vanishes, and PreconditionViolation if the new invariants break
///   b_hat' = a_hat,  a_hat' = a_hat + a_x - b_y - (log a_hat)_xy.
HyperbolicOp laplace_transform(const HyperbolicOp& op, const ZeroTest& zt = ZeroTest::from_env());

enum class Direction { a, b };
enum class Termination { ran_to_limit, hit_factorizable };

std::string to_string(Direction d);
std::string to_string(Termination t);

struct ChainState {
  HyperbolicOp op;
  LaplaceInvariants inv;
};

struct LaplaceChain {
  std::vector<ChainState> states;  // states[0] is the input
  Termination termination = Termination::ran_to_limit;
  Direction direction = Direction::a;
};

/// Applies at most max_steps transformations. Direction b runs the chain of
/// the operator with x and y exchanged, stopping on b_hat, and reports the
/// states in the original variables.
LaplaceChain laplace_chain(const HyperbolicOp& op, int max_steps, Direction dir = Direction::a,
                           const ZeroTest& zt = ZeroTest::from_env());

/// Residuals u[n+1] - 2u[n] - (log u[n])_xy + u[n-1] for the interior n.
/// Throws PreconditionViolation on fewer than three entries or a vanishing
/// interior entry.
std::vector<Expr> recurrence_residuals(const std::vector<Expr>& u, const ZeroTest& zt = ZeroTest::from_env());
bool verify_recurrence(const std::vector<Expr>& u, const ZeroTest& zt = ZeroTest::from_env());

/// Which invariant plays u_n. The recurrence holds for u_n = -a_hat_n; with
/// u_n = a_hat_n the log term enters with the opposite sign.
enum class RecurrenceSign { negated, plain };
std::vector<Expr> chain_sequence(const LaplaceChain& chain, RecurrenceSign sign = RecurrenceSign::negated);
bool verify_recurrence(const LaplaceChain& chain, RecurrenceSign sign = RecurrenceSign::negated,
                       const ZeroTest& zt = ZeroTest::from_env());

class IntMatrix {
 public:
  explicit IntMatrix(int n = 0) : n_(n), d_(static_cast<std::size_t>(n) * n) {}
  int size() const { return n_; }
  mpz_class& at(int i, int j) { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  const mpz_class& at(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  std::vector<mpz_class> apply(const std::vector<mpz_class>& v) const;
  std::string str() const;
  bool operator==(const IntMatrix&) const = default;

 private:
  int n_;
  std::vector<mpz_class> d_;
};

enum class Closure { truncated, periodic };

/// Tridiagonal -2/1 matrix; periodic adds 1 in both corners (N >= 3,
/// PeriodicTooSmall otherwise).
IntMatrix cartan_matrix(int n, Closure closure);

/// Fraction-free (Bareiss) elimination.
mpz_class det_exact(const IntMatrix& m);

struct ExprMatrix {
  int n = 0;
  std::vector<Expr> d;
  explicit ExprMatrix(int size = 0) : n(size), d(static_cast<std::size_t>(size) * size) {}
  Expr& at(int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; }
  const Expr& at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
  std::string str() const;
};

ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b);

/// Bloch shift matrix: ones above the diagonal, k^N in the bottom-left slot.
ExprMatrix shift_matrix(int n, const Expr& k);
ExprMatrix shift_matrix_inverse(int n, const Expr& k);

/// Determinant by expansion over column subsets; fine up to n of about 8.
Expr det_symbolic(const ExprMatrix& m);

/// d_0 = 1 and d_n = det(Dx^i Dy^j w), i, j = 0..n-1, for n = 0..n_max.
std::vector<Expr> dn_sequence(const Expr& w, int n_max);

/// Index families for the chain b_n, c_n. Open families are checked at the
/// indices whose neighbours exist; periodic ones wrap mod N.
enum class IndexClosure { open, periodic };

/// Applies [Dy + c T, Dx + b - T^{-1}] to opaque psi_n and tests every
/// component for zero. With `bloch` set, psi_{n+N} = k^N psi_n.
bool commutator_check(const std::vector<Expr>& b, const std::vector<Expr>& c, IndexClosure closure,
                      const ZeroTest& zt = ZeroTest::from_env(), bool bloch = false);

/// c_{n,x} - c_n (b_{n+1} - b_n) and b_{n,y} - c_n + c_{n-1} at the same
/// indices commutator_check inspects.
std::vector<Expr> toda_b_residuals(const std::vector<Expr>& b, const std::vector<Expr>& c, IndexClosure closure);

/// Substitutes c_n = exp(q_{n+1} - q_n), b_n = q_{n,x} into
///   c_{n+1} - c_n - b_{n,y} - (log c_n)_xy,  b_{n+1} - b_n - (log c_n)_x
/// and tests the residuals in formal mode. With impose_toda, the mixed
/// derivatives of opaque q_m are first rewritten by the Toda lattice
/// q_{m,xy} = exp(q_{m+1} - q_m) - exp(q_m - q_{m-1}).
std::vector<Expr> toda_gauge_residuals(const std::vector<Expr>& q, IndexClosure closure, bool impose_toda);
bool toda_gauge_check(const std::vector<Expr>& q, IndexClosure closure, bool impose_toda,
                      const ZeroTest& zt = ZeroTest::from_env());

/// Opaque q_n(x,y), named q<n>.
std::vector<Expr> opaque_family(const std::string& stem, int n);

enum class ClosureKind { liouville, sinh_gordon, tzitzeica };
std::optional<ClosureKind> parse_closure_kind(const std::string& s);
std::string to_string(ClosureKind k);

struct ClosureReport {
  ClosureKind kind;
  bool passed = false;
  std::string equation;          // the reduced scalar equation
  std::vector<Expr> residuals;   // all structurally zero on success
  std::optional<mpq_class> kappa;
  std::vector<std::string> remarks;
};

ClosureReport closure_identity_check(ClosureKind kind);

/// psi_2,xx + c1*psi_2,x + c0*psi_2 = 0 after eliminating psi_1 from
/// psi_1,x + b1 psi_1 = k^-2 psi_2, psi_1 = b2 psi_2 + psi_2,x.
/// The y-flow psi_2,y = -k^2 c2 psi_1 becomes psi_2,y = y1*psi_2,x + y0*psi_2.
struct BlochReduction {
  Expr c2;
  Expr c1;
  Expr c0;
  Expr y1;
  Expr y0;
};

BlochReduction bloch_reduce(const Expr& b1, const Expr& b2, const Expr& c1, const Expr& c2);

}  // namespace lpdo
