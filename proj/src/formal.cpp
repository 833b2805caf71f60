#include <unordered_map>

#include "lpdo/expr.hpp"
#include "term.hpp"

namespace lpdo {

using namespace detail;

namespace {

Expr log_rational(const mpq_class& c) {
  if (c < 0) return make_log(Expr(-1)) + log_rational(-c);
  Expr r;
  if (c.get_num() != 1) r = make_log(Expr(mpq_class(c.get_num())));
  if (c.get_den() != 1) r = r - make_log(Expr(mpq_class(c.get_den())));
  return r;
}

class Formalizer {
 public:
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
      case Kind::Sym:
      case Kind::Fun:
        return e;
      case Kind::Log:
        return flog((*this)(e.arg()));
      case Kind::Exp:
        return fexp((*this)(e.arg()));
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

  static Expr flog(const Expr& a) {
    const Sum s = terms_of(a);
    if (s.empty()) throw Error(ErrorCode::DomainError, "log(0)");
    Term t;
    Expr r;
    if (s.size() == 1) {
      t = s.front();
    } else {
      const Denominator d = split_denominator(s);
      t = Term{d.c, d.m};
      if (!d.core.is_num(1)) r = make_log(d.core);
    }
    if (t.c != 1) r = r + log_rational(t.c);
    for (const auto& [b, k] : t.m.f) r = r + Expr(k) * (b.kind() == Kind::Add ? flog(b) : make_log(b));
    return r + t.m.e;
  }

  static Expr fexp(const Expr& a) {
    Expr outside(1);
    SumBuilder rest;
    for (const Term& t : terms_of(a)) {
      if (t.m.f.size() == 1 && t.m.e.is_num(0) && t.m.f.front().second == 1 &&
          t.m.f.front().first.kind() == Kind::Log && t.c.get_den() == 1) {
        outside = outside * pow(t.m.f.front().first.arg(), t.c.get_num().get_si());
      } else {
        rest.add(t);
      }
    }
    return outside * exp(build(rest.take()));
  }

  std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr formal(const Expr& e) {
  Expr cur = e;
  for (int i = 0; i < 8; ++i) {
    Expr next = Formalizer()(cur);
    if (next == cur) return next;
    cur = next;
  }
  return cur;
}

}  // namespace lpdo
