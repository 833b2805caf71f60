#include "lpdo/expr.hpp"

#include <algorithm>
#include <ostream>

#include "term.hpp"

namespace lpdo {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_mpz(mpz_srcptr z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z) + 1);
  const std::size_t n = mpz_size(z);
  h = mix(h, n);
  if (n > 0) h = mix(h, static_cast<std::size_t>(mpz_getlimbn(z, 0)));
  return h;
}

std::size_t hash_mpq(const mpq_class& q) {
  return mix(hash_mpz(q.get_num_mpz_t()), hash_mpz(q.get_den_mpz_t()));
}

std::size_t compute_hash(const Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1000003u;
  switch (n.kind) {
    case Kind::Num:
      return mix(h, hash_mpq(n.q));
    case Kind::Sym:
      return mix(h, std::hash<std::string>{}(n.name));
    case Kind::Fun:
      h = mix(h, std::hash<std::string>{}(n.fn.name));
      h = mix(h, static_cast<std::size_t>(n.fn.dx) * 131 + static_cast<std::size_t>(n.fn.dy));
      return mix(h, (n.fn.on_x ? 1u : 0u) + (n.fn.on_y ? 2u : 0u));
    case Kind::Pow:
      h = mix(h, static_cast<std::size_t>(n.n));
      break;
    case Kind::Mul:
      h = mix(h, hash_mpq(n.q));
      break;
    default:
      break;
  }
  for (const auto& c : n.ops) h = mix(h, c.hash());
  return h;
}

int sym_rank(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  return 3;
}

template <class T>
int cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

struct NodeFactory {
  static Expr wrap(Node&& n) {
    n.hash = compute_hash(n);
    return Expr(std::make_shared<const Node>(std::move(n)));
  }
  static Expr num(const mpq_class& q) {
    Node n;
    n.kind = Kind::Num;
    n.q = q;
    return wrap(std::move(n));
  }
  static Expr unary(Kind k, const Expr& arg) {
    Node n;
    n.kind = k;
    n.ops.push_back(arg);
    return wrap(std::move(n));
  }
  static Expr pow(const Expr& base, long e) {
    Node n;
    n.kind = Kind::Pow;
    n.n = e;
    n.ops.push_back(base);
    return wrap(std::move(n));
  }
  static Expr mul(const mpq_class& c, std::vector<Expr> factors) {
    Node n;
    n.kind = Kind::Mul;
    n.q = c;
    n.ops = std::move(factors);
    return wrap(std::move(n));
  }
  static Expr add(std::vector<Expr> terms) {
    Node n;
    n.kind = Kind::Add;
    n.ops = std::move(terms);
    return wrap(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = NodeFactory::num(0);
  return z;
}

}  // namespace

Expr::Expr() : p_(zero_expr().p_) {}
Expr::Expr(int v) : Expr(mpq_class(v)) {}
Expr::Expr(long v) : Expr(mpq_class(v)) {}
Expr::Expr(const mpq_class& q) {
  if (q == 0 && zero_expr().p_) {
    p_ = zero_expr().p_;
    return;
  }
  mpq_class c = q;
  c.canonicalize();
  p_ = NodeFactory::num(c).p_;
}

Expr Expr::symbol(const std::string& name) {
  Node n;
  n.kind = Kind::Sym;
  n.name = name;
  return NodeFactory::wrap(std::move(n));
}

Expr Expr::function(const FuncSymbol& f) {
  if (!f.on_x && !f.on_y) throw Error(ErrorCode::InvalidArgument, "function " + f.name + " has no arguments");
  if (f.dx < 0 || f.dy < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  if ((f.dx > 0 && !f.on_x) || (f.dy > 0 && !f.on_y)) return Expr(0);
  Node n;
  n.kind = Kind::Fun;
  n.fn = f;
  return NodeFactory::wrap(std::move(n));
}

Expr Expr::function(const std::string& name, bool on_x, bool on_y) {
  return function(FuncSymbol{name, 0, 0, on_x, on_y});
}

Expr Expr::var(Var v) {
  static const Expr ex = symbol("x");
  static const Expr ey = symbol("y");
  return v == Var::x ? ex : ey;
}

Kind Expr::kind() const { return p_->kind; }
std::size_t Expr::hash() const { return p_->hash; }
bool Expr::is_num(long v) const { return p_->kind == Kind::Num && p_->q == v; }
bool Expr::is_atom() const {
  const Kind k = p_->kind;
  return k == Kind::Sym || k == Kind::Fun || k == Kind::Log || k == Kind::Exp;
}
const mpq_class& Expr::value() const { return p_->q; }
const std::string& Expr::name() const { return p_->name; }
const FuncSymbol& Expr::func() const { return p_->fn; }
const Expr& Expr::arg() const { return p_->ops.front(); }
long Expr::exponent() const { return p_->n; }
const mpq_class& Expr::coef() const { return p_->q; }
const std::vector<Expr>& Expr::operands() const { return p_->ops; }

int compare(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Num:
      return cmp(a.value(), b.value()) < 0 ? -1 : (cmp(a.value(), b.value()) > 0 ? 1 : 0);
    case Kind::Sym: {
      int c = cmp3(sym_rank(a.name()), sym_rank(b.name()));
      return c != 0 ? c : cmp3(a.name(), b.name());
    }
    case Kind::Fun: {
      const auto& f = a.func();
      const auto& g = b.func();
      if (int c = cmp3(f.name, g.name)) return c;
      const int df = (f.on_x ? 2 : 0) + (f.on_y ? 1 : 0);
      const int dg = (g.on_x ? 2 : 0) + (g.on_y ? 1 : 0);
      if (df != dg) return df > dg ? -1 : 1;
      if (int c = cmp3(f.dx + f.dy, g.dx + g.dy)) return c;
      return cmp3(g.dx, f.dx);
    }
    case Kind::Log:
    case Kind::Exp:
      return compare(a.arg(), b.arg());
    case Kind::Pow: {
      if (int c = compare(a.arg(), b.arg())) return c;
      return cmp3(a.exponent(), b.exponent());
    }
    case Kind::Mul:
    case Kind::Add: {
      const auto& x = a.operands();
      const auto& y = b.operands();
      const std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(x[i], y[i])) return c;
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      if (a.kind() == Kind::Mul) {
        int c = cmp(a.coef(), b.coef());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
      }
      return 0;
    }
  }
  return 0;
}

namespace detail {

long degree(const Mono& m) {
  long d = 0;
  for (const auto& [b, k] : m.f) d += k;
  return d;
}

int mono_cmp(const Mono& a, const Mono& b) {
  const long da = degree(a);
  const long db = degree(b);
  if (da != db) return da > db ? -1 : 1;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.f.size() || j < b.f.size()) {
    if (j == b.f.size()) return a.f[i].second > 0 ? -1 : 1;
    if (i == a.f.size()) return b.f[j].second > 0 ? 1 : -1;
    const int c = compare(a.f[i].first, b.f[j].first);
    if (c < 0) return a.f[i].second > 0 ? -1 : 1;
    if (c > 0) return b.f[j].second > 0 ? 1 : -1;
    if (a.f[i].second != b.f[j].second) return a.f[i].second > b.f[j].second ? -1 : 1;
    ++i;
    ++j;
  }
  return compare(a.e, b.e);
}

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r;
  r.f.reserve(a.f.size() + b.f.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.f.size() && j < b.f.size()) {
    const int c = compare(a.f[i].first, b.f[j].first);
    if (c < 0) {
      r.f.push_back(a.f[i++]);
    } else if (c > 0) {
      r.f.push_back(b.f[j++]);
    } else {
      const long k = a.f[i].second + b.f[j].second;
      if (k != 0) r.f.emplace_back(a.f[i].first, k);
      ++i;
      ++j;
    }
  }
  for (; i < a.f.size(); ++i) r.f.push_back(a.f[i]);
  for (; j < b.f.size(); ++j) r.f.push_back(b.f[j]);
  if (a.e.is_num(0)) {
    r.e = b.e;
  } else if (b.e.is_num(0)) {
    r.e = a.e;
  } else {
    r.e = a.e + b.e;
  }
  return r;
}

Mono mono_pow(const Mono& m, long n) {
  Mono r;
  if (n == 0) return r;
  r.f.reserve(m.f.size());
  for (const auto& [b, k] : m.f) r.f.emplace_back(b, k * n);
  r.e = m.e.is_num(0) ? m.e : m.e * Expr(n);
  return r;
}

bool mono_is_one(const Mono& m) { return m.f.empty() && m.e.is_num(0); }

namespace {

bool has_positive_sum(const Mono& m) {
  for (const auto& [b, k] : m.f)
    if (k > 0 && b.kind() == Kind::Add) return true;
  return false;
}

void push_factor(Mono& m, const Expr& f) {
  if (f.kind() == Kind::Exp) {
    m.e = f.arg();
  } else if (f.kind() == Kind::Pow) {
    m.f.emplace_back(f.arg(), f.exponent());
  } else {
    m.f.emplace_back(f, 1);
  }
}

}  // namespace

Term term_of(const Expr& e) {
  Term t;
  switch (e.kind()) {
    case Kind::Num:
      t.c = e.value();
      break;
    case Kind::Mul:
      t.c = e.coef();
      for (const auto& f : e.operands()) push_factor(t.m, f);
      break;
    default:
      t.c = 1;
      push_factor(t.m, e);
      break;
  }
  return t;
}

Sum terms_of(const Expr& e) {
  Sum s;
  if (e.kind() == Kind::Add) {
    s.reserve(e.operands().size());
    for (const auto& t : e.operands()) s.push_back(term_of(t));
  } else if (!e.is_num(0)) {
    s.push_back(term_of(e));
  }
  return s;
}

Expr build(const Term& t) {
  if (t.c == 0) return Expr(0);
  std::vector<Expr> fs;
  fs.reserve(t.m.f.size() + 1);
  for (const auto& [b, k] : t.m.f) fs.push_back(k == 1 ? b : NodeFactory::pow(b, k));
  if (!t.m.e.is_num(0)) fs.push_back(make_exp(t.m.e));
  if (fs.empty()) return Expr(t.c);
  if (fs.size() == 1 && t.c == 1) return fs.front();
  return NodeFactory::mul(t.c, std::move(fs));
}

Expr build(const Sum& s) {
  if (s.empty()) return Expr(0);
  if (s.size() == 1) return build(s.front());
  std::vector<Expr> ts;
  ts.reserve(s.size());
  for (const auto& t : s) ts.push_back(build(t));
  return NodeFactory::add(std::move(ts));
}

void SumBuilder::add(const Term& t) {
  if (t.c == 0) return;
  if (has_positive_sum(t.m)) {
    add(materialize(t));
    return;
  }
  auto [it, inserted] = acc_.try_emplace(t.m, t.c);
  if (!inserted) it->second += t.c;
}

Sum SumBuilder::take() {
  Sum s;
  s.reserve(acc_.size());
  for (auto& [m, c] : acc_)
    if (c != 0) s.push_back(Term{c, m});
  acc_.clear();
  return s;
}

Sum sum_mul(const Sum& a, const Sum& b) {
  SumBuilder sb;
  for (const auto& x : a)
    for (const auto& y : b) sb.add(Term{x.c * y.c, mono_mul(x.m, y.m)});
  return sb.take();
}

namespace {

Sum sum_pow(const Sum& s, long k) {
  Sum result{Term{1, Mono{}}};
  Sum base = s;
  while (k > 0) {
    if (k & 1) result = sum_mul(result, base);
    k >>= 1;
    if (k > 0) base = sum_mul(base, base);
  }
  return result;
}

}  // namespace

Sum materialize(const Term& t) {
  Mono rest;
  rest.e = t.m.e;
  std::vector<std::pair<Expr, long>> pos;
  for (const auto& fk : t.m.f) {
    if (fk.second > 0 && fk.first.kind() == Kind::Add) {
      pos.push_back(fk);
    } else {
      rest.f.push_back(fk);
    }
  }
  Sum result{Term{t.c, rest}};
  for (const auto& [d, k] : pos) result = sum_mul(result, sum_pow(terms_of(d), k));
  return result;
}

namespace {

// Minimum exponent of every base over the terms (absent counts as 0) and the
// exp factor of the leading term.
Mono common_factor(const Sum& d) {
  std::map<Expr, long> mins;
  for (const auto& [b, k] : d.front().m.f) mins[b] = std::min(k, 0L);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& f = d[i].m.f;
    for (const auto& [b, k] : f) {
      auto it = mins.find(b);
      if (it == mins.end()) {
        mins[b] = std::min(k, 0L);
      } else {
        it->second = std::min(it->second, k);
      }
    }
  }
  // Bases present in every term keep their positive minimum.
  for (auto& [b, k] : mins) {
    long lo = 0;
    bool everywhere = true;
    bool first = true;
    for (const auto& t : d) {
      auto it = std::find_if(t.m.f.begin(), t.m.f.end(), [&](const auto& p) { return p.first == b; });
      const long e = it == t.m.f.end() ? 0 : it->second;
      if (it == t.m.f.end()) everywhere = false;
      lo = first ? e : std::min(lo, e);
      first = false;
    }
    k = everywhere ? lo : std::min(lo, 0L);
  }
  Mono g;
  for (const auto& [b, k] : mins)
    if (k != 0) g.f.emplace_back(b, k);
  g.e = d.front().m.e;
  return g;
}

}  // namespace

Denominator split_denominator(const Sum& input) {
  Denominator out;
  Sum d = input;
  for (;;) {
    if (d.empty()) throw Error(ErrorCode::DivisionByZero, "denominator is zero");
    if (d.size() == 1) {
      out.c *= d.front().c;
      out.m = mono_mul(out.m, d.front().m);
      out.core = Expr(1);
      return out;
    }
    Mono g = common_factor(d);
    if (!mono_is_one(g)) {
      const Mono ginv = mono_pow(g, -1);
      SumBuilder sb;
      for (const auto& t : d) sb.add(Term{t.c, mono_mul(t.m, ginv)});
      d = sb.take();
      out.m = mono_mul(out.m, g);
      continue;
    }
    if (d.front().c != 1) {
      const mpq_class c = d.front().c;
      for (auto& t : d) t.c /= c;
      out.c *= c;
      continue;
    }
    out.core = build(d);
    return out;
  }
}

Expr make_log(const Expr& arg) { return NodeFactory::unary(Kind::Log, arg); }
Expr make_exp(const Expr& arg) { return NodeFactory::unary(Kind::Exp, arg); }

}  // namespace detail

using namespace detail;

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_num(0)) return b;
  if (b.is_num(0)) return a;
  if (a.is_num() && b.is_num()) return Expr(mpq_class(a.value() + b.value()));
  SumBuilder sb;
  sb.add(terms_of(a));
  sb.add(terms_of(b));
  return build(sb.take());
}

Expr operator-(const Expr& a) {
  if (a.is_num()) return Expr(mpq_class(-a.value()));
  Sum s = terms_of(a);
  for (auto& t : s) t.c = -t.c;
  return build(s);
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_num(0) || b.is_num(0)) return Expr(0);
  if (a.is_num(1)) return b;
  if (b.is_num(1)) return a;
  if (a.is_num() && b.is_num()) return Expr(mpq_class(a.value() * b.value()));
  return build(sum_mul(terms_of(a), terms_of(b)));
}

Expr inverse(const Expr& e) {
  if (e.is_num()) {
    if (e.value() == 0) throw Error(ErrorCode::DivisionByZero, "division by zero");
    return Expr(mpq_class(1 / e.value()));
  }
  const Sum s = terms_of(e);
  SumBuilder sb;
  if (s.size() == 1) {
    sb.add(Term{1 / s.front().c, mono_pow(s.front().m, -1)});
    return build(sb.take());
  }
  const Denominator d = split_denominator(s);
  Mono inv = mono_pow(d.m, -1);
  if (!d.core.is_num(1)) {
    Mono core;
    core.f.emplace_back(d.core, -1);
    inv = mono_mul(inv, core);
  }
  sb.add(Term{1 / d.c, inv});
  return build(sb.take());
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_num(0)) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (a.is_num(0)) return Expr(0);
  return a * inverse(b);
}

Expr pow(const Expr& base, long n) {
  if (n == 0) return Expr(1);
  if (n < 0) return pow(inverse(base), -n);
  if (n == 1) return base;
  if (base.is_num()) {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), base.value().get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(r.get_den_mpz_t(), base.value().get_den_mpz_t(), static_cast<unsigned long>(n));
    return Expr(r);
  }
  const Sum s = terms_of(base);
  if (s.size() == 1) {
    mpq_class c;
    mpz_pow_ui(c.get_num_mpz_t(), s.front().c.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(c.get_den_mpz_t(), s.front().c.get_den_mpz_t(), static_cast<unsigned long>(n));
    return build(Term{c, mono_pow(s.front().m, n)});
  }
  Sum result{Term{1, Mono{}}};
  Sum b = s;
  while (n > 0) {
    if (n & 1) result = sum_mul(result, b);
    n >>= 1;
    if (n > 0) b = sum_mul(b, b);
  }
  return build(result);
}

Expr exp(const Expr& e) {
  if (e.is_num(0)) return Expr(1);
  return make_exp(e);
}

Expr log(const Expr& e) {
  if (e.is_num(0)) throw Error(ErrorCode::DomainError, "log(0)");
  if (e.is_num(1)) return Expr(0);
  return make_log(e);
}

namespace {

std::string fun_str(const FuncSymbol& f) {
  std::string s = f.name;
  const bool differentiated = f.dx > 0 || f.dy > 0;
  if (differentiated) {
    s += '_';
    s.append(static_cast<std::size_t>(f.dx), 'x');
    s.append(static_cast<std::size_t>(f.dy), 'y');
  }
  const bool both = f.on_x && f.on_y;
  if (!differentiated) {
    s += both ? "(x,y)" : (f.on_x ? "(x)" : "(y)");
  } else if (!both) {
    s += f.on_x ? "(x)" : "(y)";
  }
  return s;
}

std::string factor_str(const Expr& b, long k) {
  std::string s = to_string(b);
  if (b.kind() == Kind::Add) s = "(" + s + ")";
  if (k != 1) s += "^" + std::to_string(k);
  return s;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

// Prints |t| and reports the sign separately.
std::string term_str(const Term& t, bool& negative) {
  negative = t.c < 0;
  const mpq_class a = abs(t.c);
  std::vector<std::string> num;
  std::vector<std::string> den;
  // Each sum in the denominator gets its own division: the parser expands
  // (s1*s2), which would merge the factors into one base.
  std::string sums;
  for (const auto& [b, k] : t.m.f) {
    if (k > 0) {
      num.push_back(factor_str(b, k));
    } else if (b.kind() == Kind::Add) {
      sums += "/" + factor_str(b, -k);
    } else {
      den.push_back(factor_str(b, -k));
    }
  }
  if (!t.m.e.is_num(0)) num.push_back("exp(" + to_string(t.m.e) + ")");
  const std::string p = a.get_num().get_str();
  const std::string q = a.get_den().get_str();
  std::string top;
  if (num.empty()) {
    top = p;
  } else {
    top = (p == "1" ? std::string() : p + "*") + join(num, "*");
  }
  if (den.empty() && q == "1") return top + sums;
  std::vector<std::string> d;
  if (q != "1") d.push_back(q);
  d.insert(d.end(), den.begin(), den.end());
  return top + "/" + (d.size() == 1 ? d.front() : "(" + join(d, "*") + ")") + sums;
}

}  // namespace

std::string Expr::str() const {
  switch (kind()) {
    case Kind::Num:
      return value().get_str();
    case Kind::Sym:
      return name();
    case Kind::Fun:
      return fun_str(func());
    case Kind::Log:
      return "log(" + arg().str() + ")";
    case Kind::Exp:
      return "exp(" + arg().str() + ")";
    case Kind::Pow:
    case Kind::Mul: {
      bool neg = false;
      std::string s = term_str(term_of(*this), neg);
      return neg ? "-" + s : s;
    }
    case Kind::Add: {
      std::string out;
      bool first = true;
      for (const auto& t : operands()) {
        bool neg = false;
        const std::string s = term_str(term_of(t), neg);
        if (first) {
          out = neg ? "-" + s : s;
        } else {
          out += neg ? " - " : " + ";
          out += s;
        }
        first = false;
      }
      return out;
    }
  }
  return {};
}

std::string to_string(const Expr& e) { return e.str(); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

Expr normalize(const Expr& e, Mode mode) {
  switch (mode) {
    case Mode::standard:
      return e;
    case Mode::formal:
      return formal(e);
    case Mode::rational:
      return rational(e);
  }
  return e;
}

}  // namespace lpdo
