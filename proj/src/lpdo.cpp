#include "lpdo/lpdo.hpp"

#include <algorithm>

#include "lpdo/ops.hpp"

namespace lpdo {

namespace {

mpz_class binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

std::string derivative_str(int j, int k) {
  std::string s;
  if (j > 0) s += j == 1 ? "Dx" : "Dx^" + std::to_string(j);
  if (k > 0) {
    if (!s.empty()) s += "*";
    s += k == 1 ? "Dy" : "Dy^" + std::to_string(k);
  }
  return s;
}

}  // namespace

Lpdo::Lpdo(const Expr& scalar) { put(MultiIndex{0, 0}, scalar); }

Lpdo Lpdo::term(int j, int k, const Expr& c) {
  if (j < 0 || k < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  Lpdo r;
  r.put(MultiIndex{j, k}, c);
  return r;
}

void Lpdo::put(const MultiIndex& m, const Expr& c) {
  if (c.is_num(0)) {
    c_.erase(m);
  } else {
    c_.insert_or_assign(m, c);
  }
}

Expr Lpdo::coeff(int j, int k) const {
  auto it = c_.find(MultiIndex{j, k});
  return it == c_.end() ? Expr(0) : it->second;
}

Lpdo Lpdo::with(int j, int k, const Expr& c) const {
  Lpdo r = *this;
  r.put(MultiIndex{j, k}, c);
  return r;
}

int Lpdo::order() const {
  int n = -1;
  for (const auto& [m, c] : c_) n = std::max(n, m.order());
  return n;
}

std::string Lpdo::str() const {
  if (c_.empty()) return "0";
  std::string out;
  bool first = true;
  auto emit = [&](bool neg, const std::string& body) {
    if (first) {
      out = neg ? "-" + body : body;
    } else {
      out += neg ? " - " : " + ";
      out += body;
    }
    first = false;
  };
  for (const auto& [m, c] : c_) {
    if (m.order() == 0) {
      const std::vector<Expr> terms =
          c.kind() == Kind::Add ? c.operands() : std::vector<Expr>{c};
      for (const auto& t : terms) {
        std::string s = t.str();
        const bool neg = s.front() == '-';
        emit(neg, neg ? s.substr(1) : s);
      }
      continue;
    }
    const std::string d = derivative_str(m.j, m.k);
    if (c.is_num(1)) {
      emit(false, d);
    } else if (c.is_num(-1)) {
      emit(true, d);
    } else if (c.kind() == Kind::Add) {
      const bool neg = c.operands().front().str().front() == '-';
      emit(neg, "(" + (neg ? -c : c).str() + ")*" + d);
    } else {
      std::string s = c.str();
      const bool neg = s.front() == '-';
      emit(neg, (neg ? s.substr(1) : s) + "*" + d);
    }
  }
  return out;
}

Lpdo operator+(const Lpdo& a, const Lpdo& b) {
  Lpdo r = a;
  for (const auto& [m, c] : b.c_) {
    auto it = r.c_.find(m);
    r.put(m, it == r.c_.end() ? c : it->second + c);
  }
  return r;
}

Lpdo operator-(const Lpdo& a) {
  return a.map([](const Expr& c) { return -c; });
}

Lpdo operator-(const Lpdo& a, const Lpdo& b) { return a + (-b); }

Lpdo scale(const Lpdo& a, const Expr& s) {
  return a.map([&](const Expr& c) { return s * c; });
}

Lpdo compose(const Lpdo& a, const Lpdo& b) {
  std::map<MultiIndex, Expr, MultiIndexOrder> acc;
  for (const auto& [mb, cb] : b.coeffs()) {
    std::map<std::pair<int, int>, Expr> derivs;
    for (const auto& [ma, ca] : a.coeffs()) {
      for (int r = 0; r <= ma.j; ++r) {
        for (int s = 0; s <= ma.k; ++s) {
          auto key = std::make_pair(r, s);
          auto it = derivs.find(key);
          if (it == derivs.end()) it = derivs.emplace(key, diff(diff(cb, Var::x, r), Var::y, s)).first;
          if (it->second.is_num(0)) continue;
          const Expr w = Expr(mpq_class(binomial(ma.j, r) * binomial(ma.k, s))) * ca * it->second;
          const MultiIndex m{ma.j - r + mb.j, ma.k - s + mb.k};
          auto [pos, inserted] = acc.try_emplace(m, w);
          if (!inserted) pos->second = pos->second + w;
        }
      }
    }
  }
  Lpdo r;
  for (const auto& [m, c] : acc) r.put(m, c);
  return r;
}

Lpdo power(const Lpdo& a, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative operator power");
  Lpdo r(Expr(1));
  for (int i = 0; i < n; ++i) r = compose(r, a);
  return r;
}

Expr apply(const Lpdo& a, const Expr& psi) {
  Expr r;
  for (const auto& [m, c] : a.coeffs()) r = r + c * diff(diff(psi, Var::x, m.j), Var::y, m.k);
  return r;
}

bool equivalent(const Lpdo& a, const Lpdo& b, const ZeroTest& zt, Mode mode) {
  const Lpdo d = a - b;
  for (const auto& [m, c] : d.coeffs())
    if (!is_zero(c, zt, mode)) return false;
  return true;
}

Lpdo gauge_conjugate(const Lpdo& a, const Expr& phi) {
  if (phi.is_num(0)) return a;
  return compose(Lpdo(exp(-phi)), compose(a, Lpdo(exp(phi))));
}

Lpdo swap_xy(const Lpdo& a) {
  Lpdo r;
  for (const auto& [m, c] : a.coeffs()) r = r + Lpdo::term(m.k, m.j, swap_xy(c));
  return r;
}

Expr CharPoly::eval(const Expr& w) const {
  Expr r;
  for (const auto& k : c) r = r * w + k;
  return r;
}

Expr CharPoly::derivative_at(const Expr& w) const {
  Expr r;
  const int n = degree();
  for (int i = 0; i < n; ++i) r = r * w + Expr(n - i) * c[static_cast<std::size_t>(i)];
  return r;
}

std::string CharPoly::str() const {
  Expr w = Expr::symbol("w");
  Expr p;
  for (const auto& k : c) p = p * w + k;
  return p.str();
}

CharPoly char_poly(const Lpdo& a) {
  const int n = a.order();
  if (n != 2 && n != 3) throw Error(ErrorCode::OrderUnsupported, "order " + std::to_string(n));
  CharPoly p;
  for (int j = n; j >= 0; --j) {
    const Expr c = a.coeff(j, n - j);
    if (p.c.empty() && c.is_num(0)) continue;
    p.c.push_back(c);
  }
  return p;
}

namespace {

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> small;
  std::vector<mpz_class> large;
  for (mpz_class d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

mpq_class horner(const std::vector<mpq_class>& c, const mpq_class& w) {
  mpq_class r = 0;
  for (const auto& k : c) r = r * w + k;
  return r;
}

std::vector<mpq_class> deflate(const std::vector<mpq_class>& c, const mpq_class& w) {
  std::vector<mpq_class> q;
  mpq_class r = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    r = r * w + c[i];
    q.push_back(r);
  }
  return q;
}

}  // namespace

std::vector<Root> rational_roots(const CharPoly& p) {
  std::vector<mpq_class> c;
  for (const auto& k : p.c) {
    if (!k.is_num()) throw Error(ErrorCode::NonConstantCoefficients, "characteristic coefficient " + k.str());
    c.push_back(k.value());
  }
  std::vector<Root> roots;
  if (c.size() < 2) return roots;
  int zeros = 0;
  while (c.size() > 1 && c.back() == 0) {
    c.pop_back();
    ++zeros;
  }
  if (zeros > 0) roots.push_back(Root{Expr(0), zeros});
  if (c.size() > 1) {
    mpz_class l = 1;
    for (const auto& k : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), k.get_den_mpz_t());
    std::vector<mpq_class> ic;
    for (const auto& k : c) ic.push_back(k * l);
    const auto ps = divisors(ic.back().get_num());
    const auto qs = divisors(ic.front().get_num());
    std::vector<mpq_class> cand;
    for (const auto& pp : ps)
      for (const auto& qq : qs)
        for (int sgn : {1, -1}) {
          mpq_class w(pp * sgn, qq);
          w.canonicalize();
          if (std::find(cand.begin(), cand.end(), w) == cand.end()) cand.push_back(w);
        }
    for (const auto& w : cand) {
      int mult = 0;
      while (c.size() > 1 && horner(c, w) == 0) {
        c = deflate(c, w);
        ++mult;
      }
      if (mult > 0) roots.push_back(Root{Expr(w), mult});
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.value < b.value; });
  return roots;
}

std::pair<Lpdo, Expr> reduce_form(const Lpdo& op, Kill kill) {
  for (const auto& [m, c] : op.coeffs()) {
    const bool allowed = (m.j == 1 && m.k == 1) || m.order() < 2;
    if (!allowed) throw Error(ErrorCode::NotNormalForm, op.str());
  }
  if (!op.coeff(1, 1).is_num(1)) throw Error(ErrorCode::NotNormalForm, op.str());
  const Expr phi = kill == Kill::a ? -integrate_poly(op.coeff(1, 0), Var::y) : -integrate_poly(op.coeff(0, 1), Var::x);
  return {gauge_conjugate(op, phi), phi};
}

namespace {

// Dy -> l*Dx + Dy with coefficients rewritten by x -> x - l*y.
Lpdo shear(const Lpdo& a, int l) {
  const Expr x = Expr::var(Var::x);
  const Expr y = Expr::var(Var::y);
  const Bindings b{{"x", x - Expr(l) * y}};
  Lpdo r;
  for (const auto& [m, c] : a.coeffs()) {
    const Expr cc = substitute(c, b);
    for (int i = 0; i <= m.k; ++i) {
      mpz_class lp;
      mpz_pow_ui(lp.get_mpz_t(), mpz_class(l < 0 ? -l : l).get_mpz_t(), static_cast<unsigned long>(i));
      if (l < 0 && i % 2 == 1) lp = -lp;
      r = r + Lpdo::term(m.j + i, m.k - i, Expr(mpq_class(binomial(m.k, i) * lp)) * cc);
    }
  }
  return r;
}

bool has_function_coefficients(const Lpdo& a) {
  for (const auto& [m, c] : a.coeffs())
    if (has_functions(c)) return true;
  return false;
}

}  // namespace

std::pair<Lpdo, VariableChange> normalize_leading(const Lpdo& a, const ZeroTest& zt) {
  const int n = a.order();
  if (n != 2 && n != 3) throw Error(ErrorCode::OrderUnsupported, "order " + std::to_string(n));
  VariableChange ch;
  if (!is_zero(a.coeff(n, 0), zt)) return {a, ch};
  if (!is_zero(a.coeff(0, n), zt)) {
    ch.swapped = true;
    return {swap_xy(a), ch};
  }
  for (int j = 0; j <= n; ++j) {
    if (!is_constant(a.coeff(j, n - j)))
      throw Error(ErrorCode::CannotNormalize, "principal coefficients are not constant");
  }
  if (has_function_coefficients(a))
    throw Error(ErrorCode::CannotNormalize, "shear of opaque coefficient functions");
  for (int l = 1; l <= 8; ++l) {
    Lpdo b = shear(a, l);
    if (!is_zero(b.coeff(n, 0), zt)) {
      ch.shear = l;
      return {b, ch};
    }
  }
  throw Error(ErrorCode::CannotNormalize, "no shear up to 8 produces a leading coefficient");
}

Lpdo undo_change(const Lpdo& a, const VariableChange& ch) {
  Lpdo r = a;
  if (ch.shear != 0) {
    if (has_function_coefficients(r))
      throw Error(ErrorCode::CannotNormalize, "shear of opaque coefficient functions");
    r = shear(r, -ch.shear);
  }
  if (ch.swapped) r = swap_xy(r);
  return r;
}

}  // namespace lpdo
