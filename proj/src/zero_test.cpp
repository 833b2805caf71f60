#include "lpdo/zero_test.hpp"

#include <cstdlib>
#include <random>
#include <unordered_map>

#include "term.hpp"

namespace lpdo {

using namespace detail;

ZeroTest ZeroTest::from_env() {
  ZeroTest zt;
  if (const char* s = std::getenv("LPDO_ZERO_TRIALS")) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 1 && v <= 100000) zt.trials = static_cast<int>(v);
  }
  return zt;
}

namespace {

struct Pole {};

mpq_class power(const mpq_class& b, long n) {
  if (n == 0) return 1;
  if (b == 0) {
    if (n < 0) throw Pole{};
    return 0;
  }
  mpq_class r;
  const unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
  mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), k);
  mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), k);
  r.canonicalize();
  if (n < 0) r = 1 / r;
  return r;
}

class Evaluator {
 public:
  virtual ~Evaluator() = default;

  mpq_class eval(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    mpq_class v = compute(e);
    memo_.emplace(e.id(), v);
    return v;
  }

 protected:
  virtual mpq_class sym(const Expr& e) = 0;
  virtual mpq_class fun(const Expr& e) = 0;
  virtual mpq_class logarithm(const Expr& e) = 0;
  virtual mpq_class exponential(const Expr& e) = 0;

 private:
  mpq_class compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Num:
        return e.value();
      case Kind::Sym:
        return sym(e);
      case Kind::Fun:
        return fun(e);
      case Kind::Log:
        return logarithm(e);
      case Kind::Exp:
        return exponential(e);
      case Kind::Pow:
        return power(eval(e.arg()), e.exponent());
      case Kind::Mul: {
        mpq_class r = e.coef();
        for (const auto& f : e.operands()) r *= eval(f);
        return r;
      }
      case Kind::Add: {
        mpq_class r = 0;
        for (const auto& t : e.operands()) r += eval(t);
        return r;
      }
    }
    return 0;
  }

  std::unordered_map<const Node*, mpq_class> memo_;
};

class RandomEvaluator : public Evaluator {
 public:
  RandomEvaluator(std::uint64_t seed, long lcm) : rng_(seed), lcm_(lcm) {}

 protected:
  mpq_class sym(const Expr& e) override { return draw(e.name()); }
  mpq_class fun(const Expr& e) override { return draw(e.str()); }
  mpq_class logarithm(const Expr& e) override { return draw(e.str()); }

  mpq_class exponential(const Expr& e) override {
    mpq_class r = 1;
    for (const Term& t : terms_of(e.arg())) {
      const std::string key = "exp:" + build(Term{1, t.m}).str();
      auto it = bases_.find(key);
      if (it == bases_.end()) {
        std::uniform_int_distribution<long> d(2, kRange);
        it = bases_.emplace(key, mpq_class(d(rng_))).first;
      }
      const mpq_class k = t.c * lcm_;
      r *= power(it->second, k.get_num().get_si());
    }
    return r;
  }

 private:
  static constexpr long kRange = 1000000;

  mpq_class draw(const std::string& key) {
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    std::uniform_int_distribution<long> d(-kRange, kRange);
    return values_.emplace(key, mpq_class(d(rng_))).first->second;
  }

  std::mt19937_64 rng_;
  long lcm_;
  std::map<std::string, mpq_class> values_;
  std::map<std::string, mpq_class> bases_;
};

class PointEvaluator : public Evaluator {
 public:
  explicit PointEvaluator(const Point& p) : p_(p) {}

 protected:
  mpq_class sym(const Expr& e) override { return lookup(e.name()); }

  mpq_class fun(const Expr& e) override {
    auto it = p_.find(e.str());
    if (it != p_.end()) return it->second;
    const FuncSymbol& f = e.func();
    if (f.dx == 0 && f.dy == 0) return lookup(f.name);
    return lookup(e.str());
  }

  mpq_class logarithm(const Expr& e) override {
    auto it = p_.find(e.str());
    if (it != p_.end()) return it->second;
    if (eval(e.arg()) == 1) return 0;
    throw Error(ErrorCode::UnboundSymbol, e.str());
  }

  mpq_class exponential(const Expr& e) override {
    auto it = p_.find(e.str());
    if (it != p_.end()) return it->second;
    if (eval(e.arg()) == 0) return 1;
    throw Error(ErrorCode::UnboundSymbol, e.str());
  }

 private:
  mpq_class lookup(const std::string& key) const {
    auto it = p_.find(key);
    if (it == p_.end()) throw Error(ErrorCode::UnboundSymbol, key);
    return it->second;
  }

  const Point& p_;
};

void exp_denominators(const Expr& e, mpz_class& l) {
  if (e.kind() == Kind::Exp) {
    for (const Term& t : terms_of(e.arg())) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den_mpz_t());
  }
  for (const auto& c : e.operands()) exp_denominators(c, l);
}

std::uint64_t trial_seed(std::uint64_t seed, int attempt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

bool is_zero(const Expr& e, const ZeroTest& zt, Mode mode) {
  if (zt.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
  const Expr n = normalize(e, mode);
  if (n.is_num()) return n.value() == 0;
  mpz_class l = 1;
  exp_denominators(n, l);
  if (!l.fits_slong_p()) throw Error(ErrorCode::InvalidArgument, "exponent denominators too large");
  int ok = 0;
  const int attempts = zt.trials * 8;
  for (int a = 0; a < attempts && ok < zt.trials; ++a) {
    RandomEvaluator ev(trial_seed(zt.seed, a), l.get_si());
    try {
      if (ev.eval(n) != 0) return false;
      ++ok;
    } catch (const Pole&) {
    }
  }
  if (ok == 0) throw Error(ErrorCode::Inconclusive, "every sampled point hit a pole");
  return true;
}

bool is_zero(const Expr& e, std::uint64_t seed, int trials) {
  return is_zero(e, ZeroTest{seed, trials}, Mode::standard);
}

bool is_zero(const Expr& e) { return is_zero(e, ZeroTest::from_env(), Mode::standard); }

mpq_class eval_at(const Expr& e, const Point& point) {
  Point canonical = point;
  for (auto& [name, v] : canonical) v.canonicalize();
  PointEvaluator ev(canonical);
  try {
    return ev.eval(e);
  } catch (const Pole&) {
    throw Error(ErrorCode::PoleError, "denominator vanishes at the point");
  }
}

}  // namespace lpdo
