// Recursive-descent parser for the shared expression/operator grammar:
//
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' exponent)?
//   primary := INT | '(' sum ')' | exp '(' sum ')' | log '(' sum ')'
//            | Dx | Dy | x | y | z | k | NAME | NAME deps | NAME '_' [xy]+ deps?
//   deps    := '(' var (',' var)* ')'
//
// '*' is composition. A bare NAME is a constant parameter, NAME(x,y) an
// opaque function. Every value is an operator; expressions are the order-0
// ones.

#include <cctype>

#include "lpdo/lpdo.hpp"
#include "lpdo/ops.hpp"

namespace lpdo {

namespace {

class Parser {
 public:
  Parser(const std::string& text, bool operators) : s_(text), ops_(operators) {}

  Lpdo run() {
    Lpdo v = sum();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(msg, line, col);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  Lpdo sum() {
    Lpdo v = product();
    for (;;) {
      if (eat('+')) {
        v = v + product();
      } else if (eat('-')) {
        v = v - product();
      } else {
        return v;
      }
    }
  }

  Lpdo product() {
    Lpdo v = unary();
    for (;;) {
      skip();
      const std::size_t at = pos_;
      if (eat('*')) {
        v = compose(v, unary());
      } else if (eat('/')) {
        const Expr r = reciprocal(at);
        if (!v.is_scalar() && !is_constant(r)) fail_at("division of an operator by a non-constant", at);
        v = v.map([&](const Expr& c) { return c * r; });
      } else {
        return v;
      }
    }
  }

  // 1/u for the unary u after '/'. A power is inverted as pow(base, -n), so
  // 1/(x + y)^2 keeps the sum as its base instead of expanding it first.
  Expr reciprocal(std::size_t at) {
    if (eat('-')) return -reciprocal(at);
    if (eat('+')) return reciprocal(at);
    const Lpdo base = primary();
    long n = 1;
    if (eat('^')) n = exponent();
    if (!base.is_scalar()) fail_at("division by an operator", at);
    try {
      return pow(base.coeff(0, 0), -n);
    } catch (const Error& e) {
      fail_at(e.what(), at);
    }
  }

  Lpdo unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power_expr();
  }

  long integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    if (pos_ - start > 9) fail_at("exponent too large", start);
    return std::stol(s_.substr(start, pos_ - start));
  }

  long exponent() {
    if (eat('(')) {
      const long n = eat('-') ? -integer() : (eat('+'), integer());
      expect(')');
      return n;
    }
    if (eat('-')) return -integer();
    eat('+');
    return integer();
  }

  Lpdo power_expr() {
    Lpdo base = primary();
    skip();
    const std::size_t at = pos_;
    if (!eat('^')) return base;
    const long n = exponent();
    if (base.is_scalar()) {
      try {
        return Lpdo(pow(base.coeff(0, 0), n));
      } catch (const Error& e) {
        fail_at(e.what(), at);
      }
    }
    if (n < 0) fail_at("negative power of an operator", at);
    return power(base, static_cast<int>(n));
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Expr scalar_arg(const std::string& fn) {
    expect('(');
    const std::size_t at = pos_;
    const Lpdo v = sum();
    expect(')');
    if (!v.is_scalar()) fail_at(fn + " of an operator", at);
    return v.coeff(0, 0);
  }

  static bool is_var(const std::string& s) { return s == "x" || s == "y" || s == "z" || s == "k"; }

  // Optional dependency list after a function name.
  bool deps(bool& on_x, bool& on_y) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != '(') return false;
    ++pos_;
    on_x = on_y = false;
    do {
      skip();
      const std::size_t at = pos_;
      const std::string v = identifier();
      if (v == "x" && !on_x) {
        on_x = true;
      } else if (v == "y" && !on_y) {
        on_y = true;
      } else {
        fail_at("function arguments must be x and/or y", at);
      }
    } while (eat(','));
    expect(')');
    return true;
  }

  Lpdo primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Lpdo v = sum();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Lpdo(Expr(mpq_class(mpz_class(s_.substr(start, pos_ - start)))));
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unexpected '") + c + "'");
    const std::size_t at = pos_;
    const std::string id = identifier();
    if (id == "Dx" || id == "Dy") {
      if (!ops_) fail_at("operator symbol in a scalar expression", at);
      return id == "Dx" ? Lpdo::dx() : Lpdo::dy();
    }
    if (id == "exp") return Lpdo(exp(scalar_arg(id)));
    if (id == "log") {
      const Expr a = scalar_arg(id);
      if (a.is_num(0)) fail_at("log(0)", at);
      return Lpdo(log(a));
    }
    const std::size_t us = id.find('_');
    if (us != std::string::npos) {
      const std::string name = id.substr(0, us);
      const std::string suffix = id.substr(us + 1);
      if (name.empty() || is_var(name) || name == "exp" || name == "log" || name == "Dx" || name == "Dy")
        fail_at("invalid function name '" + name + "'", at);
      if (suffix.empty() || suffix.find_first_not_of("xy") != std::string::npos)
        fail_at("derivative suffix must consist of x and y", at + us + 1);
      FuncSymbol f{name, 0, 0, true, true};
      for (char d : suffix) (d == 'x' ? f.dx : f.dy) += 1;
      deps(f.on_x, f.on_y);
      return Lpdo(Expr::function(f));
    }
    if (is_var(id)) return Lpdo(Expr::symbol(id));
    FuncSymbol f{id, 0, 0, true, true};
    if (deps(f.on_x, f.on_y)) return Lpdo(Expr::function(f));
    return Lpdo(Expr::symbol(id));
  }

  const std::string& s_;
  bool ops_;
  std::size_t pos_ = 0;
};

}  // namespace

Lpdo parse_operator(const std::string& text) { return Parser(text, true).run(); }

Expr parse_expr(const std::string& text) { return Parser(text, false).run().coeff(0, 0); }

}  // namespace lpdo
