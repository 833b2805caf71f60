#include "lpdo/poly.hpp"

#include <algorithm>

namespace lpdo {

Poly Poly::constant(int nvars, const mpq_class& c) {
  Poly p(nvars);
  p.add_term(Exps(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

Poly Poly::variable(int nvars, int i) {
  Poly p(nvars);
  Exps e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(i)] = 1;
  p.add_term(e, 1);
  return p;
}

bool Poly::is_constant() const {
  if (t_.empty()) return true;
  if (t_.size() > 1) return false;
  const auto& e = t_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
}

int Poly::degree(int v) const {
  int d = 0;
  for (const auto& [e, c] : t_) d = std::max(d, e[static_cast<std::size_t>(v)]);
  return d;
}

Poly Poly::coeff(int v, int d) const {
  Poly r(n_);
  for (const auto& [e, c] : t_) {
    if (e[static_cast<std::size_t>(v)] != d) continue;
    Exps f = e;
    f[static_cast<std::size_t>(v)] = 0;
    r.add_term(f, c);
  }
  return r;
}

void Poly::add_term(const Exps& e, const mpq_class& c) {
  if (c == 0) return;
  auto [it, inserted] = t_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [e, c] : o.t_) r.add_term(e, c);
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [e, c] : r.t_) c = -c;
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  Poly r(n_);
  Exps e(static_cast<std::size_t>(n_));
  for (const auto& [ea, ca] : t_) {
    for (const auto& [eb, cb] : o.t_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Poly Poly::scaled(const mpq_class& c) const {
  if (c == 0) return Poly(n_);
  Poly r = *this;
  for (auto& [e, k] : r.t_) k *= c;
  return r;
}

Poly Poly::pow(unsigned k) const {
  Poly r = constant(n_, 1);
  Poly b = *this;
  while (k > 0) {
    if (k & 1u) r = r * b;
    k >>= 1u;
    if (k > 0) b = b * b;
  }
  return r;
}

Poly Poly::monic() const {
  if (t_.empty()) return *this;
  return scaled(1 / leading_coefficient());
}

std::optional<Poly> Poly::divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  Poly q(a.n_);
  Poly r = a;
  const Exps& lb = b.leading_monomial();
  const mpq_class cb = b.leading_coefficient();
  Exps m(lb.size());
  while (!r.is_zero()) {
    const Exps& lr = r.leading_monomial();
    for (std::size_t i = 0; i < lb.size(); ++i) {
      m[i] = lr[i] - lb[i];
      if (m[i] < 0) return std::nullopt;
    }
    Poly t(a.n_);
    t.add_term(m, r.leading_coefficient() / cb);
    q = q + t;
    r = r - t * b;
  }
  return q;
}

Poly prem(const Poly& a, const Poly& b, int v) {
  const int db = b.degree(v);
  const Poly lb = b.coeff(v, db);
  Poly r = a;
  Poly::Exps shift(static_cast<std::size_t>(a.nvars()), 0);
  while (!r.is_zero() && r.degree(v) >= db) {
    const int dr = r.degree(v);
    const Poly lr = r.coeff(v, dr);
    shift[static_cast<std::size_t>(v)] = dr - db;
    Poly xs(a.nvars());
    xs.add_term(shift, 1);
    r = lb * r - lr * xs * b;
  }
  return r;
}

Poly content(const Poly& p, int v) {
  Poly g(p.nvars());
  for (int d = p.degree(v); d >= 0; --d) {
    const Poly c = p.coeff(v, d);
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.monic() : gcd(g, c);
    if (g.is_constant()) return Poly::constant(p.nvars(), 1);
  }
  return g;
}

namespace {

int main_variable(const Poly& a, const Poly& b) {
  int best = a.nvars();
  for (const Poly* p : {&a, &b})
    for (const auto& [e, c] : p->terms())
      for (int i = 0; i < best; ++i)
        if (e[static_cast<std::size_t>(i)] > 0) {
          best = i;
          break;
        }
  return best;
}

// Scales p to integer coefficients with gcd 1; keeps pseudo-remainder
// sequences from growing their numeric coefficients.
Poly integral(const Poly& p) {
  mpz_class l = 1;
  mpz_class g = 0;
  for (const auto& [e, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  for (const auto& [e, c] : p.terms()) {
    const mpz_class n = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (g == 0) return p;
  return p.scaled(mpq_class(l, g));
}

Poly primitive(const Poly& p, int v) {
  if (p.is_zero()) return p;
  return integral(*Poly::divide(p, content(p, v)));
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly::constant(a.nvars(), 1);
  const int v = main_variable(a, b);
  const Poly ca = content(a, v);
  const Poly cb = content(b, v);
  const Poly c = gcd(ca, cb);
  Poly pa = *Poly::divide(a, ca);
  Poly pb = *Poly::divide(b, cb);
  if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    if (pb.degree(v) == 0) {
      pa = Poly::constant(a.nvars(), 1);
      break;
    }
    const Poly r = prem(pa, pb, v);
    pa = pb;
    pb = primitive(r, v);
  }
  return (primitive(pa, v) * c).monic();
}

}  // namespace lpdo
