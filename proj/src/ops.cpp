#include "lpdo/ops.hpp"

#include <set>
#include <unordered_map>

#include "term.hpp"

namespace lpdo {

using namespace detail;

namespace {

const char* var_name(Var v) { return v == Var::x ? "x" : "y"; }

class Differ {
 public:
  explicit Differ(Var v) : v_(v) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr r = compute(e);
    memo_.emplace(e.id(), r);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Num:
        return Expr(0);
      case Kind::Sym:
        return Expr(e.name() == var_name(v_) ? 1 : 0);
      case Kind::Fun: {
        FuncSymbol f = e.func();
        if (!f.depends_on(v_)) return Expr(0);
        (v_ == Var::x ? f.dx : f.dy) += 1;
        return Expr::function(f);
      }
      case Kind::Log:
        return (*this)(e.arg()) / e.arg();
      case Kind::Exp:
        return (*this)(e.arg()) * e;
      case Kind::Add: {
        SumBuilder sb;
        for (const auto& t : e.operands()) sb.add(terms_of((*this)(t)));
        return build(sb.take());
      }
      case Kind::Pow:
      case Kind::Mul:
        return term(term_of(e));
    }
    return Expr(0);
  }

  Expr term(const Term& t) {
    SumBuilder sb;
    for (std::size_t j = 0; j < t.m.f.size(); ++j) {
      const auto& [b, k] = t.m.f[j];
      const Expr db = (*this)(b);
      if (db.is_num(0)) continue;
      Mono m = t.m;
      if (k == 1) {
        m.f.erase(m.f.begin() + static_cast<long>(j));
      } else {
        m.f[j].second = k - 1;
      }
      sb.add(sum_mul(Sum{Term{t.c * k, m}}, terms_of(db)));
    }
    if (!t.m.e.is_num(0)) {
      const Expr de = (*this)(t.m.e);
      if (!de.is_num(0)) sb.add(sum_mul(Sum{t}, terms_of(de)));
    }
    return build(sb.take());
  }

  Var v_;
  std::unordered_map<const Node*, Expr> memo_;
};

// Structural rebuild; `hook` may override any node before recursion.
class Rebuilder {
 public:
  using Hook = std::function<std::optional<Expr>(const Expr&)>;
  explicit Rebuilder(Hook hook) : hook_(std::move(hook)) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr r = compute(e);
    memo_.emplace(e.id(), r);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    if (auto o = hook_(e)) return *o;
    switch (e.kind()) {
      case Kind::Num:
      case Kind::Sym:
      case Kind::Fun:
        return e;
      case Kind::Log:
        return log((*this)(e.arg()));
      case Kind::Exp:
        return exp((*this)(e.arg()));
      case Kind::Pow:
        return pow((*this)(e.arg()), e.exponent());
      case Kind::Mul: {
        Expr r(e.coef());
        for (const auto& f : e.operands()) r = r * (*this)(f);
        return r;
      }
      case Kind::Add: {
        SumBuilder sb;
        for (const auto& t : e.operands()) sb.add(terms_of((*this)(t)));
        return build(sb.take());
      }
    }
    return e;
  }

  Hook hook_;
  std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr diff(const Expr& e, Var v, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  Expr r = e;
  for (int i = 0; i < n && !r.is_num(0); ++i) r = Differ(v)(r);
  return r;
}

Expr map_leaves(const Expr& e, const std::function<Expr(const Expr&)>& f) {
  return Rebuilder([&](const Expr& n) -> std::optional<Expr> {
    if (n.kind() == Kind::Sym || n.kind() == Kind::Fun) return f(n);
    return std::nullopt;
  })(e);
}

Expr replace(const Expr& e, const Expr& atom, const Expr& value) {
  return Rebuilder([&](const Expr& n) -> std::optional<Expr> {
    if (n.kind() == atom.kind() && n == atom) return value;
    return std::nullopt;
  })(e);
}

Expr substitute(const Expr& e, const Bindings& bindings) {
  std::map<std::pair<std::string, std::pair<int, int>>, Expr> jets;
  return map_leaves(e, [&](const Expr& leaf) -> Expr {
    if (leaf.kind() == Kind::Sym) {
      auto it = bindings.find(leaf.name());
      return it == bindings.end() ? leaf : it->second;
    }
    const FuncSymbol& f = leaf.func();
    auto it = bindings.find(f.name);
    if (it == bindings.end()) return leaf;
    auto key = std::make_pair(f.name, std::make_pair(f.dx, f.dy));
    auto j = jets.find(key);
    if (j != jets.end()) return j->second;
    Expr d = diff(diff(it->second, Var::x, f.dx), Var::y, f.dy);
    jets.emplace(key, d);
    return d;
  });
}

bool free_of(const Expr& e, Var v) {
  switch (e.kind()) {
    case Kind::Num:
      return true;
    case Kind::Sym:
      return e.name() != var_name(v);
    case Kind::Fun:
      return !e.func().depends_on(v);
    default:
      for (const auto& c : e.operands())
        if (!free_of(c, v)) return false;
      return true;
  }
}

bool is_constant(const Expr& e) { return free_of(e, Var::x) && free_of(e, Var::y); }

bool has_functions(const Expr& e) {
  if (e.kind() == Kind::Fun) return true;
  for (const auto& c : e.operands())
    if (has_functions(c)) return true;
  return false;
}

namespace {

void collect_atoms(const Expr& e, std::set<Expr>& out) {
  if (e.is_atom()) out.insert(e);
  if (e.kind() == Kind::Sym || e.kind() == Kind::Fun) return;
  for (const auto& c : e.operands()) collect_atoms(c, out);
}

}  // namespace

std::vector<Expr> atoms(const Expr& e) {
  std::set<Expr> s;
  collect_atoms(e, s);
  return {s.begin(), s.end()};
}

Expr integrate_poly(const Expr& e, Var v) {
  const Expr xv = Expr::var(v);
  SumBuilder sb;
  for (const Term& t : terms_of(e)) {
    long n = 0;
    Mono rest;
    rest.e = t.m.e;
    std::optional<FuncSymbol> jet;
    for (const auto& [b, k] : t.m.f) {
      if (b == xv) {
        n = k;
      } else if (b.kind() == Kind::Fun && b.func().depends_on(v) && k == 1 && !jet &&
                 (v == Var::x ? b.func().dx : b.func().dy) > 0) {
        jet = b.func();
      } else if (!free_of(b, v)) {
        throw Error(ErrorCode::NotPolynomial, "term " + build(t).str() + " is not polynomial in " + var_name(v));
      } else {
        rest.f.emplace_back(b, k);
      }
    }
    if (!free_of(t.m.e, v))
      throw Error(ErrorCode::NotPolynomial, "exponential depends on " + std::string(var_name(v)));
    if (n < 0) throw Error(ErrorCode::NotPolynomial, "negative power of " + std::string(var_name(v)));
    if (jet) {
      if (n != 0) throw Error(ErrorCode::NotPolynomial, "product of " + std::string(var_name(v)) + " and a function jet");
      FuncSymbol g = *jet;
      (v == Var::x ? g.dx : g.dy) -= 1;
      sb.add(sum_mul(Sum{Term{t.c, rest}}, terms_of(Expr::function(g))));
      continue;
    }
    Mono m = mono_mul(rest, Mono{{{xv, n + 1}}, Expr(0)});
    sb.add(Term{t.c / (n + 1), m});
  }
  return build(sb.take());
}

Expr coefficient_of(const Expr& e, const Expr& atom, long n) {
  SumBuilder sb;
  for (const Term& t : terms_of(e)) {
    if (atom.kind() == Kind::Exp) {
      const bool has = t.m.e == atom.arg();
      if ((n == 1 && has) || (n == 0 && t.m.e.is_num(0))) {
        Term u = t;
        u.m.e = Expr(0);
        sb.add(u);
      }
      continue;
    }
    long k = 0;
    Term u{t.c, Mono{{}, t.m.e}};
    for (const auto& fk : t.m.f) {
      if (fk.first == atom) {
        k = fk.second;
      } else {
        u.m.f.push_back(fk);
      }
    }
    if (k == n) sb.add(u);
  }
  return build(sb.take());
}

Expr swap_xy(const Expr& e) {
  return map_leaves(e, [](const Expr& leaf) -> Expr {
    if (leaf.kind() == Kind::Sym) {
      if (leaf.name() == "x") return Expr::var(Var::y);
      if (leaf.name() == "y") return Expr::var(Var::x);
      return leaf;
    }
    FuncSymbol f = leaf.func();
    std::swap(f.dx, f.dy);
    std::swap(f.on_x, f.on_y);
    return Expr::function(f);
  });
}

}  // namespace lpdo
