#include <algorithm>
#include <unordered_map>

#include "lpdo/expr.hpp"
#include "lpdo/poly.hpp"
#include "term.hpp"

namespace lpdo {

using namespace detail;

namespace {

// A quotient whose denominator is kept as a product of powers of primitive
// integral polynomials with positive leading coefficient. The factors are
// refined against each other by exact division, so repeated factors such as
// (x + y) and (x + y)^2 share one entry; no general gcd is computed.
struct Frac {
  Poly num;
  std::vector<std::pair<Poly, int>> den;
};

// p = s * b with b primitive over Z and positive leading coefficient.
std::pair<mpq_class, Poly> split_scalar(const Poly& p) {
  mpz_class l = 1;
  mpz_class g = 0;
  for (const auto& [e, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  for (const auto& [e, c] : p.terms()) {
    const mpz_class v = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  mpq_class s(g, l);
  s.canonicalize();
  if (p.leading_coefficient() < 0) s = -s;
  return {s, p.scaled(1 / s)};
}

// Multiplies the denominator by b^k, keeping the factor list refined. Any
// scalar split off b is divided out of `scale`.
void insert_factor(std::vector<std::pair<Poly, int>>& den, const Poly& raw, int k, mpq_class& scale) {
  auto [s, b] = split_scalar(raw);
  mpq_class sk = 1;
  for (int i = 0; i < k; ++i) sk *= s;
  scale /= sk;
  if (b.is_constant()) return;
  for (std::size_t i = 0; i < den.size(); ++i) {
    const Poly c = den[i].first;
    if (c == b) {
      den[i].second += k;
      return;
    }
    // A divisor's leading monomial is never larger than the dividend's.
    if (c.leading_monomial() > b.leading_monomial()) {
      if (auto q = Poly::divide(c, b)) {
        // c = b*q: replace c^j by b^j q^j, then add b^k.
        const int j = den[i].second;
        den.erase(den.begin() + static_cast<long>(i));
        insert_factor(den, b, j + k, scale);
        insert_factor(den, *q, j, scale);
        return;
      }
    } else if (c.leading_monomial() < b.leading_monomial()) {
      if (auto q = Poly::divide(b, c)) {
        den[i].second += k;
        insert_factor(den, *q, k, scale);
        return;
      }
    }
  }
  den.emplace_back(b, k);
}

class Rationalizer {
 public:
  explicit Rationalizer(const Expr& e) {
    collect(e);
    std::size_t i = 0;
    for (auto& [atom, idx] : index_) idx = static_cast<int>(i++);
    kernels_.resize(index_.size());
    for (const auto& [atom, idx] : index_) kernels_[static_cast<std::size_t>(idx)] = atom;
  }

  Expr run(const Expr& e) {
    const Frac f = convert(e);
    Expr r = to_expr(f.num);
    for (const auto& [b, k] : f.den) r = r * pow(to_expr(b), -k);
    return r;
  }

 private:
  int n() const { return static_cast<int>(kernels_.size()); }

  Expr kernel_of(const Expr& atom) {
    if (auto it = kmap_.find(atom.id()); it != kmap_.end()) return it->second;
    Expr k = atom;
    if (atom.kind() == Kind::Log) k = log(rational(atom.arg()));
    if (atom.kind() == Kind::Exp) k = exp(rational(atom.arg()));
    kmap_.emplace(atom.id(), k);
    return k;
  }

  void collect(const Expr& e) {
    if (e.is_atom()) {
      const Expr k = kernel_of(e);
      if (k.is_atom()) index_.emplace(k, 0);
      else collect(k);
      return;
    }
    for (const auto& c : e.operands()) collect(c);
  }

  Frac poly(const Poly& p) const { return {p, {}}; }

  static void cancel(Frac& f) {
    if (f.num.is_zero()) {
      f.den.clear();
      return;
    }
    for (auto& [b, k] : f.den) {
      while (k > 0) {
        auto q = Poly::divide(f.num, b);
        if (!q) break;
        f.num = std::move(*q);
        --k;
      }
    }
    std::erase_if(f.den, [](const auto& d) { return d.second == 0; });
  }

  Poly expand(const std::vector<std::pair<Poly, int>>& den) const {
    Poly r = Poly::constant(n(), 1);
    for (const auto& [b, k] : den) r = r * b.pow(static_cast<unsigned>(k));
    return r;
  }

  Frac mul(const Frac& a, const Frac& b) const {
    Frac r{a.num * b.num, a.den};
    mpq_class scale = 1;
    for (const auto& [p, k] : b.den) insert_factor(r.den, p, k, scale);
    r.num = r.num.scaled(scale);
    return r;
  }

  Frac inverse(const Frac& a) const {
    if (a.num.is_zero()) throw Error(ErrorCode::DivisionByZero, "denominator is zero");
    Frac r{expand(a.den), {}};
    mpq_class scale = 1;
    insert_factor(r.den, a.num, 1, scale);
    r.num = r.num.scaled(scale);
    cancel(r);
    return r;
  }

  // f over a refined basis: the numerator and one exponent per basis entry.
  static std::pair<Poly, std::vector<int>> express(const Frac& f, std::vector<std::pair<Poly, int>> basis) {
    const std::size_t size = basis.size();
    mpq_class scale = 1;
    for (const auto& [p, k] : f.den) insert_factor(basis, p, k, scale);
    std::vector<int> e;
    for (const auto& [p, k] : basis) e.push_back(k);
    if (e.size() != size) throw Error(ErrorCode::PreconditionViolation, "denominator basis is not refined");
    return {f.num.scaled(scale), e};
  }

  Frac add(const Frac& a, const Frac& b) const {
    if (a.num.is_zero()) return b;
    if (b.num.is_zero()) return a;
    std::vector<std::pair<Poly, int>> basis;
    mpq_class unused = 1;
    for (const Frac* f : {&a, &b})
      for (const auto& [p, k] : f->den) insert_factor(basis, p, 0, unused);
    const auto [na, ea] = express(a, basis);
    const auto [nb, eb] = express(b, basis);
    Frac r{Poly(n()), basis};
    Poly fa = na;
    Poly fb = nb;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const int m = std::max(ea[i], eb[i]);
      r.den[i].second = m;
      if (m > ea[i]) fa = fa * basis[i].first.pow(static_cast<unsigned>(m - ea[i]));
      if (m > eb[i]) fb = fb * basis[i].first.pow(static_cast<unsigned>(m - eb[i]));
    }
    r.num = fa + fb;
    std::erase_if(r.den, [](const auto& d) { return d.second == 0; });
    return r;
  }

  Frac convert(const Expr& e) {
    if (e.kind() != Kind::Pow && e.kind() != Kind::Add) return convert_node(e);
    if (auto it = cache_.find(e.id()); it != cache_.end()) return it->second;
    Frac f = convert_node(e);
    cache_.emplace(e.id(), f);
    return f;
  }

  Frac convert_node(const Expr& e) {
    switch (e.kind()) {
      case Kind::Num:
        return poly(Poly::constant(n(), e.value()));
      case Kind::Sym:
      case Kind::Fun:
      case Kind::Log:
      case Kind::Exp: {
        const Expr k = kernel_of(e);
        if (!k.is_atom()) return convert(k);
        return poly(Poly::variable(n(), index_.at(k)));
      }
      case Kind::Pow: {
        const Frac b = convert(e.arg());
        const long x = e.exponent();
        Frac r = poly(Poly::constant(n(), 1));
        const Frac base = x < 0 ? inverse(b) : b;
        for (long i = 0; i < (x < 0 ? -x : x); ++i) r = mul(r, base);
        cancel(r);
        return r;
      }
      case Kind::Mul: {
        Frac r = poly(Poly::constant(n(), e.coef()));
        for (const auto& f : e.operands()) r = mul(r, convert(f));
        cancel(r);
        return r;
      }
      case Kind::Add: {
        // Terms sharing a denominator are summed before any basis work.
        std::vector<Frac> groups;
        for (const auto& t : e.operands()) {
          Frac g = convert(t);
          auto it = std::find_if(groups.begin(), groups.end(), [&](const Frac& h) { return h.den == g.den; });
          if (it == groups.end()) {
            groups.push_back(std::move(g));
          } else {
            it->num = it->num + g.num;
          }
        }
        Frac r = poly(Poly(n()));
        for (const auto& g : groups) r = add(r, g);
        cancel(r);
        return r;
      }
    }
    return poly(Poly(n()));
  }

  Expr to_expr(const Poly& p) const {
    SumBuilder sb;
    for (const auto& [ex, c] : p.terms()) {
      Expr t(c);
      for (std::size_t i = 0; i < ex.size(); ++i)
        if (ex[i] > 0) t = t * pow(kernels_[i], ex[i]);
      sb.add(terms_of(t));
    }
    return build(sb.take());
  }

  std::map<Expr, int> index_;
  std::vector<Expr> kernels_;
  std::unordered_map<const Node*, Expr> kmap_;
  std::unordered_map<const Node*, Frac> cache_;
};

}  // namespace

Expr rational(const Expr& e) {
  if (e.is_num() || e.kind() == Kind::Sym || e.kind() == Kind::Fun) return e;
  return Rationalizer(e).run(e);
}

}  // namespace lpdo
