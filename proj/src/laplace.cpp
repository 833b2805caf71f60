#include "lpdo/laplace.hpp"

#include <functional>
#include <sstream>

#include "lpdo/ops.hpp"

namespace lpdo {

Lpdo HyperbolicOp::to_lpdo() const {
  return Lpdo::term(1, 1, Expr(1)) + Lpdo::term(1, 0, a) + Lpdo::term(0, 1, b) + Lpdo(c);
}

HyperbolicOp HyperbolicOp::from_lpdo(const Lpdo& op) {
  for (const auto& [m, c] : op.coeffs()) {
    const bool ok = m.order() < 2 || (m.j == 1 && m.k == 1 && c.is_num(1));
    if (!ok) throw Error(ErrorCode::NotNormalForm, "expected Dx*Dy + a*Dx + b*Dy + c, got " + op.str());
  }
  if (!op.coeff(1, 1).is_num(1)) throw Error(ErrorCode::NotNormalForm, "missing Dx*Dy in " + op.str());
  return {op.coeff(1, 0), op.coeff(0, 1), op.coeff(0, 0)};
}

LaplaceInvariants laplace_invariants(const HyperbolicOp& op) {
  const Expr ab = op.a * op.b;
  return {rational(ab + diff(op.a, Var::x) - op.c), rational(ab + diff(op.b, Var::y) - op.c)};
}

bool equivalent(const HyperbolicOp& p, const HyperbolicOp& q, const ZeroTest& zt) {
  const auto i = laplace_invariants(p);
  const auto j = laplace_invariants(q);
  return is_zero(i.a_hat - j.a_hat, zt) && is_zero(i.b_hat - j.b_hat, zt);
}

HyperbolicOp laplace_transform(const HyperbolicOp& op, const ZeroTest& zt) {
  const auto inv = laplace_invariants(op);
  if (is_zero(inv.a_hat, zt))
    throw Error(ErrorCode::FactorizableStop, "a_hat vanishes, the operator factors as (Dy + b)(Dx + a)");
  const Expr log_a = log(inv.a_hat);
  HyperbolicOp next;
  next.a = rational(op.a - diff(log_a, Var::y));
  next.b = op.b;
  next.c = rational(diff(op.b, Var::y) + next.a * op.b - inv.a_hat);

  const auto out = laplace_invariants(next);
  const Expr expect_a =
      inv.a_hat + diff(op.a, Var::x) - diff(op.b, Var::y) - diff(diff(log_a, Var::x), Var::y);
  if (!is_zero(out.b_hat - inv.a_hat, zt) || !is_zero(out.a_hat - expect_a, zt))
    throw Error(ErrorCode::PreconditionViolation, "transformed invariants break the chain relations");
  return next;
}

std::string to_string(Direction d) { return d == Direction::a ? "a" : "b"; }

std::string to_string(Termination t) {
  return t == Termination::ran_to_limit ? "ran_to_limit" : "hit_factorizable";
}

namespace {

HyperbolicOp swapped(const HyperbolicOp& op) { return {swap_xy(op.b), swap_xy(op.a), swap_xy(op.c)}; }

}  // namespace

LaplaceChain laplace_chain(const HyperbolicOp& op, int max_steps, Direction dir, const ZeroTest& zt) {
  if (max_steps < 1) throw Error(ErrorCode::InvalidArgument, "max_steps must be positive");
  LaplaceChain chain;
  chain.direction = dir;
  HyperbolicOp cur = dir == Direction::a ? op : swapped(op);
  auto record = [&](const HyperbolicOp& h) {
    const HyperbolicOp o = dir == Direction::a ? h : swapped(h);
    chain.states.push_back({o, laplace_invariants(o)});
  };
  record(cur);
  for (int step = 0;; ++step) {
    if (is_zero(laplace_invariants(cur).a_hat, zt)) {
      chain.termination = Termination::hit_factorizable;
      break;
    }
    if (step == max_steps) {
      chain.termination = Termination::ran_to_limit;
      break;
    }
    cur = laplace_transform(cur, zt);
    record(cur);
  }
  return chain;
}

std::vector<Expr> recurrence_residuals(const std::vector<Expr>& u, const ZeroTest& zt) {
  if (u.size() < 3) throw Error(ErrorCode::PreconditionViolation, "the recurrence needs at least three terms");
  std::vector<Expr> out;
  for (std::size_t n = 1; n + 1 < u.size(); ++n) {
    if (is_zero(u[n], zt, Mode::formal))
      throw Error(ErrorCode::PreconditionViolation, "interior term u_" + std::to_string(n) + " vanishes");
    const Expr l = diff(diff(log(u[n]), Var::x), Var::y);
    out.push_back(u[n + 1] - Expr(2) * u[n] - l + u[n - 1]);
  }
  return out;
}

bool verify_recurrence(const std::vector<Expr>& u, const ZeroTest& zt) {
  for (const Expr& r : recurrence_residuals(u, zt))
    if (!is_zero(r, zt, Mode::formal)) return false;
  return true;
}

std::vector<Expr> chain_sequence(const LaplaceChain& chain, RecurrenceSign sign) {
  std::vector<Expr> u;
  for (const auto& s : chain.states) {
    const Expr& h = chain.direction == Direction::a ? s.inv.a_hat : s.inv.b_hat;
    u.push_back(sign == RecurrenceSign::negated ? -h : h);
  }
  return u;
}

bool verify_recurrence(const LaplaceChain& chain, RecurrenceSign sign, const ZeroTest& zt) {
  return verify_recurrence(chain_sequence(chain, sign), zt);
}

// ---- matrices

std::vector<mpz_class> IntMatrix::apply(const std::vector<mpz_class>& v) const {
  std::vector<mpz_class> r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r[i] += at(i, j) * v[j];
  return r;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  for (int i = 0; i < n_; ++i) {
    os << '[';
    for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << at(i, j).get_str();
    os << "]\n";
  }
  return os.str();
}

IntMatrix cartan_matrix(int n, Closure closure) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "matrix size must be positive");
  if (closure == Closure::periodic && n < 3)
    throw Error(ErrorCode::PeriodicTooSmall, "periodic closure needs N >= 3");
  IntMatrix m(n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = -2;
    if (i + 1 < n) m.at(i, i + 1) = m.at(i + 1, i) = 1;
  }
  if (closure == Closure::periodic) m.at(0, n - 1) = m.at(n - 1, 0) = 1;
  return m;
}

mpz_class det_exact(const IntMatrix& input) {
  IntMatrix m = input;
  const int n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int p = k + 1;
      while (p < n && m.at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        mpz_class t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m.at(i, j) = t;
      }
      m.at(i, k) = 0;
    }
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

std::string ExprMatrix::str() const {
  std::ostringstream os;
  for (int i = 0; i < n; ++i) {
    os << '[';
    for (int j = 0; j < n; ++j) os << (j ? ", " : "") << at(i, j).str();
    os << "]\n";
  }
  return os.str();
}

ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.n != b.n) throw Error(ErrorCode::InvalidArgument, "matrix sizes differ");
  ExprMatrix r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j)
      for (int k = 0; k < a.n; ++k) r.at(i, j) += a.at(i, k) * b.at(k, j);
  return r;
}

ExprMatrix shift_matrix(int n, const Expr& k) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "matrix size must be positive");
  ExprMatrix m(n);
  for (int i = 0; i + 1 < n; ++i) m.at(i, i + 1) = Expr(1);
  m.at(n - 1, 0) += pow(k, n);
  return m;
}

ExprMatrix shift_matrix_inverse(int n, const Expr& k) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "matrix size must be positive");
  ExprMatrix m(n);
  for (int i = 0; i + 1 < n; ++i) m.at(i + 1, i) = Expr(1);
  m.at(0, n - 1) += pow(k, -n);
  return m;
}

Expr det_symbolic(const ExprMatrix& m) {
  const int n = m.n;
  if (n == 0) return Expr(1);
  if (n > 20) throw Error(ErrorCode::InvalidArgument, "matrix too large for subset expansion");
  // dp[mask]: signed sum over assignments of the first popcount(mask) rows
  // to the columns in mask.
  std::vector<Expr> dp(std::size_t{1} << n);
  dp[0] = Expr(1);
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask].is_num(0)) continue;
    const int row = __builtin_popcountll(mask);
    if (row == n) continue;
    for (int j = 0; j < n; ++j) {
      if (mask >> j & 1) continue;
      const Expr& e = m.at(row, j);
      if (e.is_num(0)) continue;
      const int above = __builtin_popcountll(mask >> (j + 1));
      const Expr t = dp[mask] * e;
      dp[mask | std::size_t{1} << j] += above % 2 ? -t : t;
    }
  }
  return dp.back();
}

std::vector<Expr> dn_sequence(const Expr& w, int n_max) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "n must be non-negative");
  std::vector<Expr> out{Expr(1)};
  for (int n = 1; n <= n_max; ++n) {
    ExprMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = diff(diff(w, Var::x, i), Var::y, j);
    out.push_back(det_symbolic(m));
  }
  return out;
}

// ---- chain identities

namespace {

struct Family {
  const std::vector<Expr>& v;
  IndexClosure closure;
  const Expr& operator()(int n) const {
    const int size = static_cast<int>(v.size());
    if (closure == IndexClosure::periodic) return v[((n % size) + size) % size];
    return v.at(n);
  }
};

std::pair<int, int> checked_range(std::size_t size, IndexClosure closure, int reach_back, int reach_forward) {
  const int n = static_cast<int>(size);
  if (closure == IndexClosure::periodic) return {0, n};
  return {reach_back, n - reach_forward};
}

void require_same_size(const std::vector<Expr>& b, const std::vector<Expr>& c) {
  if (b.size() != c.size() || b.empty())
    throw Error(ErrorCode::InvalidArgument, "b and c families must have the same nonzero length");
}

}  // namespace

bool commutator_check(const std::vector<Expr>& b, const std::vector<Expr>& c, IndexClosure closure,
                      const ZeroTest& zt, bool bloch) {
  require_same_size(b, c);
  const Family B{b, closure};
  const Family C{c, closure};
  const int size = static_cast<int>(b.size());
  const Expr k = Expr::symbol("k");
  auto psi = [&](int m) {
    if (closure == IndexClosure::open) return Expr::function("psi" + std::to_string(m));
    const int r = ((m % size) + size) % size;
    const Expr atom = Expr::function("psi" + std::to_string(r));
    return bloch ? pow(k, m - r) * atom : atom;
  };
  using Seq = std::function<Expr(int)>;
  auto op_a = [&](const Seq& f) -> Seq {
    return [&, f](int n) { return diff(f(n), Var::y) + C(n) * f(n + 1); };
  };
  auto op_b = [&](const Seq& f) -> Seq {
    return [&, f](int n) { return diff(f(n), Var::x) + B(n) * f(n) - f(n - 1); };
  };
  const Seq ab = op_a(op_b(psi));
  const Seq ba = op_b(op_a(psi));
  const auto [lo, hi] = checked_range(b.size(), closure, 1, 1);
  for (int n = lo; n < hi; ++n)
    if (!is_zero(ab(n) - ba(n), zt)) return false;
  return true;
}

std::vector<Expr> toda_b_residuals(const std::vector<Expr>& b, const std::vector<Expr>& c, IndexClosure closure) {
  require_same_size(b, c);
  const Family B{b, closure};
  const Family C{c, closure};
  std::vector<Expr> out;
  const auto [lo, hi] = checked_range(b.size(), closure, 1, 1);
  for (int n = lo; n < hi; ++n) {
    out.push_back(diff(C(n), Var::x) - C(n) * (B(n + 1) - B(n)));
    out.push_back(diff(B(n), Var::y) - C(n) + C(n - 1));
  }
  return out;
}

std::vector<Expr> opaque_family(const std::string& stem, int n) {
  std::vector<Expr> out;
  for (int i = 0; i < n; ++i) out.push_back(Expr::function(stem + std::to_string(i)));
  return out;
}

std::vector<Expr> toda_gauge_residuals(const std::vector<Expr>& q, IndexClosure closure, bool impose_toda) {
  if (q.size() < (closure == IndexClosure::open ? 3u : 1u))
    throw Error(ErrorCode::InvalidArgument, "q family too short");
  const Family Q{q, closure};
  auto c = [&](int n) { return exp(Q(n + 1) - Q(n)); };
  auto b = [&](int n) { return diff(Q(n), Var::x); };

  std::vector<std::pair<Expr, Expr>> rules;
  if (impose_toda) {
    const auto [lo, hi] = checked_range(q.size(), closure, 1, 1);
    for (int m = lo; m < hi; ++m) {
      const Expr& qm = Q(m);
      if (qm.kind() != Kind::Fun || qm.func().dx != 0 || qm.func().dy != 0) continue;
      FuncSymbol jet = qm.func();
      jet.dx = jet.dy = 1;
      rules.emplace_back(Expr::function(jet), c(m) - c(m - 1));
    }
  }
  std::vector<Expr> out;
  const auto [lo, hi] = checked_range(q.size(), closure, 0, 2);
  for (int n = lo; n < hi; ++n) {
    const Expr lc = log(c(n));
    Expr r1 = c(n + 1) - c(n) - diff(b(n), Var::y) - diff(diff(lc, Var::x), Var::y);
    Expr r2 = b(n + 1) - b(n) - diff(lc, Var::x);
    for (const auto& [atom, value] : rules) {
      r1 = replace(r1, atom, value);
      r2 = replace(r2, atom, value);
    }
    out.push_back(formal(r1));
    out.push_back(formal(r2));
  }
  return out;
}

bool toda_gauge_check(const std::vector<Expr>& q, IndexClosure closure, bool impose_toda, const ZeroTest& zt) {
  for (const Expr& r : toda_gauge_residuals(q, closure, impose_toda))
    if (!is_zero(r, zt, Mode::formal)) return false;
  return true;
}

// ---- closures

std::optional<ClosureKind> parse_closure_kind(const std::string& s) {
  if (s == "liouville") return ClosureKind::liouville;
  if (s == "sinh-gordon" || s == "sinh_gordon") return ClosureKind::sinh_gordon;
  if (s == "tzitzeica") return ClosureKind::tzitzeica;
  return std::nullopt;
}

std::string to_string(ClosureKind k) {
  switch (k) {
    case ClosureKind::liouville:
      return "liouville";
    case ClosureKind::sinh_gordon:
      return "sinh-gordon";
    case ClosureKind::tzitzeica:
      return "tzitzeica";
  }
  return "";
}

namespace {

Expr log_xy(const Expr& u) { return diff(diff(log(u), Var::x), Var::y); }

Expr canonical(const Expr& e) { return rational(formal(e)); }

// Periodic chain equations u_{n+1} - 2u_n - (log u_n)_xy + u_{n-1} = 0.
std::vector<Expr> periodic_system(const std::vector<Expr>& u) {
  const int n = static_cast<int>(u.size());
  std::vector<Expr> eqs;
  for (int i = 0; i < n; ++i)
    eqs.push_back(u[(i + 1) % n] - Expr(2) * u[i] - log_xy(u[i]) + u[(i + n - 1) % n]);
  return eqs;
}

Expr theta() { return Expr::function("theta"); }
Expr theta_xy() { return Expr::function(FuncSymbol{"theta", 1, 1, true, true}); }

void finish(ClosureReport& r, const std::vector<Expr>& eqs, const Expr& rhs) {
  r.equation = "theta_xy = " + rhs.str();
  r.passed = true;
  for (const Expr& e : eqs) {
    const Expr res = canonical(replace(formal(e), theta_xy(), rhs));
    r.residuals.push_back(res);
    r.passed = r.passed && res.is_num(0);
  }
}

}  // namespace

ClosureReport closure_identity_check(ClosureKind kind) {
  ClosureReport r{kind, false, "", {}, std::nullopt, {}};
  const Expr t = theta();
  switch (kind) {
    case ClosureKind::liouville: {
      const Expr x = var_x();
      const Expr y = var_y();
      const Expr u = -pow(x + y, -2);
      const Expr res = canonical(log_xy(u) + Expr(2) * u);
      r.equation = "(log u)_xy + 2*u = 0, u = " + u.str();
      r.residuals.push_back(res);
      r.passed = res.is_num(0);
      break;
    }
    case ClosureKind::sinh_gordon: {
      const auto eqs = periodic_system({exp(t), exp(-t)});
      // First equation: theta_xy = rhs with rhs free of theta_xy.
      const Expr rhs = formal(theta_xy() + eqs[0]);
      // rhs = kappa*(exp(-theta) - exp(theta)); read kappa off at theta = x,
      // where d/dx at x = 0 equals -2*kappa.
      const Expr probe = diff(substitute(rhs, {{"theta", var_x()}}), Var::x);
      const Expr at0 = formal(substitute(probe, {{"x", Expr(0)}}));
      finish(r, eqs, rhs);
      if (at0.is_num()) {
        const mpq_class kappa = -at0.value() / 2;
        r.kappa = kappa;
        const Expr form = Expr(kappa) * (exp(-t) - exp(t));
        const bool shaped = canonical(rhs - form).is_num(0);
        r.passed = r.passed && shaped;
        r.remarks.push_back("reduced form theta_xy = " + kappa.get_str() + "*(exp(-theta) - exp(theta))" +
                            (shaped ? "" : " does not match"));
        const std::string c = mpq_class(2 * kappa).get_str();
        r.remarks.push_back("equivalently theta_xy + " + c + "*sinh(theta) = 0; the unit-coefficient form " +
                            "theta_Xy + sinh(theta) = 0 holds in X = " + c + "*x");
        r.remarks.push_back(
            "the two-periodic system with right-hand sides 2*(u1 - u2) instead of 2*(u2 - u1) gives kappa = " +
            mpq_class(-kappa).get_str());
      } else {
        r.passed = false;
        r.remarks.push_back("reduced right-hand side is not a constant multiple of exp(-theta) - exp(theta)");
      }
      break;
    }
    case ClosureKind::tzitzeica: {
      const auto eqs = periodic_system({exp(t), exp(Expr(-2) * t), exp(t)});
      const Expr rhs = exp(Expr(-2) * t) - exp(t);
      finish(r, eqs, rhs);
      break;
    }
  }
  return r;
}

BlochReduction bloch_reduce(const Expr& b1, const Expr& b2, const Expr& c1, const Expr& c2) {
  (void)c1;  // enters only the psi_1 flow, which the elimination does not use
  const Expr k = Expr::symbol("k");
  const Expr psi2 = Expr::function("psi2");
  const Expr psi2_x = diff(psi2, Var::x);
  const Expr psi2_xx = diff(psi2, Var::x, 2);
  const Expr psi1 = b2 * psi2 + psi2_x;
  const Expr eq = diff(psi1, Var::x) + b1 * psi1 - pow(k, -2) * psi2;
  const Expr flow = -pow(k, 2) * c2 * psi1;
  BlochReduction r;
  r.c2 = coefficient_of(eq, psi2_xx);
  r.c1 = coefficient_of(eq, psi2_x);
  r.c0 = coefficient_of(eq, psi2);
  r.y1 = coefficient_of(flow, psi2_x);
  r.y0 = coefficient_of(flow, psi2);
  const Expr rest = eq - r.c2 * psi2_xx - r.c1 * psi2_x - r.c0 * psi2;
  if (!rest.is_num(0)) throw Error(ErrorCode::PreconditionViolation, "elimination left terms " + rest.str());
  return r;
}

}  // namespace lpdo
