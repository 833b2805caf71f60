#include "lpdo/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lpdo/bkfactor.hpp"
#include "lpdo/laplace.hpp"
#include "lpdo/ops.hpp"

namespace lpdo::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kVerbs = {"factor", "invariants", "laplace-chain", "equiv", "cartan",
                                         "dn",     "closure-check", "bloch",      "verify"};

struct Parser {
  CLI::App app{"Factorization and invariants of bivariate linear partial differential operators", "lpdo"};
  Command cmd;
  std::uint64_t seed = 0;
  int order = 0;
  std::string root;
  int trials = 0;

  Parser() {
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", cmd.json, "machine-readable output");
    app.add_option("--seed", seed, "seed of the randomized identity test");

    auto* f = app.add_subcommand("factor", "factor at one or all simple rational roots");
    f->add_option("--order", order, "expected order")->check(CLI::IsMember({2, 3}));
    f->add_option("--root", root, "characteristic root");
    f->add_option("operator", cmd.inputs)->required()->expected(1);

    auto* i = app.add_subcommand("invariants", "remainder invariants per simple root");
    i->add_flag("--hierarchy", cmd.hierarchy, "include invariants of the second-order right factors");
    i->add_option("operator", cmd.inputs)->required()->expected(1);

    auto* l = app.add_subcommand("laplace-chain", "Laplace transformations until a factorizable operator");
    l->add_option("--steps", cmd.steps, "maximal number of transformations")->required()->check(CLI::PositiveNumber);
    l->add_option("--direction", cmd.direction, "which invariant drives the chain")->check(CLI::IsMember({"a", "b"}));
    l->add_option("operator", cmd.inputs)->required()->expected(1);

    auto* e = app.add_subcommand("equiv", "gauge equivalence of two operators");
    e->add_option("operators", cmd.inputs)->required()->expected(2);

    auto* c = app.add_subcommand("cartan", "Cartan matrix of the truncated or periodic chain");
    c->add_option("-N", cmd.size, "size")->required()->check(CLI::PositiveNumber);
    c->add_flag("--periodic", cmd.periodic, "periodic closure");
    c->add_flag("--det", cmd.det, "print the determinant");

    auto* d = app.add_subcommand("dn", "determinants d_0..d_n of derivatives of w");
    d->add_option("--w", cmd.w, "expression")->required();
    d->add_option("--n", cmd.n, "largest index")->required()->check(CLI::NonNegativeNumber);

    auto* k = app.add_subcommand("closure-check", "reduction of the closed chain to a scalar equation");
    k->add_option("--kind", cmd.kind, "closure")->required()->check(
        CLI::IsMember({"liouville", "sinh-gordon", "tzitzeica"}));

    auto* b = app.add_subcommand("bloch", "eliminate psi_1 from the two-periodic Bloch system");
    b->add_option("--b1", cmd.b1, "b_1")->required();
    b->add_option("--b2", cmd.b2, "b_2")->required();

    auto* v = app.add_subcommand("verify", "run a built-in check suite");
    v->add_option("--suite", cmd.suite, "suite")->required()->check(CLI::IsMember({"paper", "random"}));
    v->add_option("--seed", seed, "seed");
    v->add_option("--trials", trials, "random cases per property")->check(CLI::PositiveNumber);
  }

  Command parse(const std::vector<std::string>& args) {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    for (const auto* sub : app.get_subcommands()) cmd.verb = sub->get_name();
    if (app.count("--seed") || app.get_subcommand("verify")->count("--seed")) cmd.seed = seed;
    auto* f = app.get_subcommand("factor");
    if (f->count("--order")) cmd.order = order;
    if (f->count("--root")) cmd.root = root;
    if (app.get_subcommand("verify")->count("--trials")) cmd.trials = trials;
    return cmd;
  }
};

std::string read_input(const std::string& s) {
  if (s.empty() || s[0] != '@') return s;
  std::ifstream in(s.substr(1));
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + s.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ZeroTest zero_test(const Command& cmd) {
  ZeroTest zt = ZeroTest::from_env();
  if (cmd.seed) zt.seed = *cmd.seed;
  return zt;
}

json factorization_json(const Factorization2& f) {
  return {{"omega", f.omega.str()},
          {"factors", {f.left().str(), f.right().str()}},
          {"remainders", {{"l2", f.l2.str()}}},
          {"exact", f.exact}};
}

json factorization_json(const Factorization3& f) {
  return {{"omega", f.omega.str()},
          {"factors", {f.left().str(), f.right().str()}},
          {"remainders", {{"l3", f.l3.str()}, {"l31", f.l31.str()}}},
          {"exact", f.exact}};
}

std::vector<Expr> roots_for(const Lpdo& op, const Command& cmd) {
  if (cmd.root) return {parse_expr(*cmd.root)};
  std::vector<Expr> out;
  for (const auto& r : rational_roots(char_poly(op)))
    if (r.simple()) out.push_back(r.value);
  if (out.empty()) throw Error(ErrorCode::NoSimpleRoots, "no simple rational root of " + char_poly(op).str());
  return out;
}

std::string factor_text(const json& f) {
  std::ostringstream os;
  os << "omega = " << f["omega"].get<std::string>() << ": (" << f["factors"][0].get<std::string>() << ")*("
     << f["factors"][1].get<std::string>() << ")" << (f["exact"].get<bool>() ? "  exact" : "") << "\n";
  for (const auto& [k, v] : f["remainders"].items()) os << "  " << k << " = " << v.get<std::string>() << "\n";
  return os.str();
}

Outcome emit(const Command& cmd, const json& j, const std::string& text, int code = 0) {
  return {code, cmd.json ? j.dump(2) + "\n" : text, ""};
}

Outcome do_factor(const Command& cmd) {
  const ZeroTest zt = zero_test(cmd);
  const Lpdo op = parse_operator(read_input(cmd.inputs.at(0)));
  const int order = op.order();
  if (cmd.order && *cmd.order != order)
    throw Error(ErrorCode::InvalidArgument, "operator has order " + std::to_string(order));
  if (order != 2 && order != 3) throw Error(ErrorCode::OrderUnsupported, "order " + std::to_string(order));
  json list = json::array();
  std::string text = "operator: " + op.str() + "\n";
  for (const Expr& w : roots_for(op, cmd)) {
    const json f = order == 2 ? factorization_json(factor2(op, w, zt)) : factorization_json(factor3(op, w, zt));
    text += factor_text(f);
    list.push_back(f);
  }
  return emit(cmd, {{"operator", op.str()}, {"order", order}, {"factorizations", list}}, text);
}

Outcome do_invariants(const Command& cmd) {
  const ZeroTest zt = zero_test(cmd);
  const Lpdo op = parse_operator(read_input(cmd.inputs.at(0)));
  if (op.order() != 2 && op.order() != 3)
    throw Error(ErrorCode::OrderUnsupported, "order " + std::to_string(op.order()));
  const InvariantSet s = invariant_hierarchy(op, zt);
  json roots = json::array();
  std::ostringstream os;
  os << "operator: " << op.str() << "\n";
  for (const auto& f : s.order2) {
    roots.push_back({{"omega", f.omega.str()}, {"l2", f.l2.str()}});
    os << "omega = " << f.omega.str() << ": l2 = " << f.l2.str() << "\n";
  }
  for (const auto& e : s.order3) {
    json r = {{"omega", e.omega.str()}, {"l3", e.l3.str()}, {"l31", e.l31.str()}};
    os << "omega = " << e.omega.str() << ": l3 = " << e.l3.str() << ", l31 = " << e.l31.str() << "\n";
    if (cmd.hierarchy) {
      json second = json::array();
      for (const auto& q : e.second) {
        second.push_back({{"omega", q.omega.str()}, {"l2", q.l2.str()}});
        os << "  right factor at omega = " << q.omega.str() << ": l2 = " << q.l2.str() << "\n";
      }
      r["second"] = second;
    }
    roots.push_back(r);
  }
  json j = {{"operator", op.str()}, {"order", op.order()}, {"roots", roots}, {"linear", nullptr}};
  if (s.linear) {
    j["linear"] = {{"l21", s.linear->l21.str()}, {"l32", s.linear->l32.str()}, {"l31", s.linear->l31.str()}};
    os << "linear: l21 = " << s.linear->l21.str() << ", l32 = " << s.linear->l32.str()
       << ", l31 = " << s.linear->l31.str() << "\n";
  }
  if (op.order() == 2) {
    try {
      const auto inv = laplace_invariants(HyperbolicOp::from_lpdo(op));
      j["laplace"] = {{"a_hat", inv.a_hat.str()}, {"b_hat", inv.b_hat.str()}};
      os << "laplace: a_hat = " << inv.a_hat.str() << ", b_hat = " << inv.b_hat.str() << "\n";
    } catch (const Error&) {
      // not in Dx*Dy normal form
    }
  }
  return emit(cmd, j, os.str());
}

Outcome do_chain(const Command& cmd) {
  const ZeroTest zt = zero_test(cmd);
  const Lpdo op = parse_operator(read_input(cmd.inputs.at(0)));
  const Direction dir = cmd.direction == "b" ? Direction::b : Direction::a;
  const LaplaceChain chain = laplace_chain(HyperbolicOp::from_lpdo(op), cmd.steps, dir, zt);
  json states = json::array();
  std::ostringstream os;
  int n = 1;
  for (const auto& s : chain.states) {
    states.push_back({{"a", s.op.a.str()},
                      {"b", s.op.b.str()},
                      {"c", s.op.c.str()},
                      {"a_hat", s.inv.a_hat.str()},
                      {"b_hat", s.inv.b_hat.str()}});
    os << n++ << ": " << s.op.to_lpdo().str() << "   a_hat = " << s.inv.a_hat.str()
       << ", b_hat = " << s.inv.b_hat.str() << "\n";
  }
  os << "termination: " << to_string(chain.termination) << "\n";
  return emit(cmd,
              {{"direction", to_string(dir)}, {"states", states}, {"termination", to_string(chain.termination)}},
              os.str());
}

Outcome do_equiv(const Command& cmd) {
  const ZeroTest zt = zero_test(cmd);
  const Lpdo p = parse_operator(read_input(cmd.inputs.at(0)));
  const Lpdo q = parse_operator(read_input(cmd.inputs.at(1)));
  bool eq = false;
  std::string method;
  try {
    eq = equivalent(HyperbolicOp::from_lpdo(p), HyperbolicOp::from_lpdo(q), zt);
    method = "laplace-invariants";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotNormalForm) throw;
    eq = equivalent(p, q, zt);
    method = "identity";
  }
  return emit(cmd, {{"equivalent", eq}, {"method", method}},
              std::string("equivalent: ") + (eq ? "true" : "false") + " (" + method + ")\n");
}

Outcome do_cartan(const Command& cmd) {
  const IntMatrix m = cartan_matrix(cmd.size, cmd.periodic ? Closure::periodic : Closure::truncated);
  json rows = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(m.at(i, j).get_si());
    rows.push_back(row);
  }
  json j = {{"N", cmd.size}, {"closure", cmd.periodic ? "periodic" : "truncated"}, {"matrix", rows}};
  std::string text = m.str();
  if (cmd.det) {
    const mpz_class d = det_exact(m);
    j["det"] = d.get_str();
    text += "det = " + d.get_str() + "\n";
  }
  return emit(cmd, j, text);
}

Outcome do_dn(const Command& cmd) {
  const Expr w = parse_expr(read_input(cmd.w));
  const auto d = dn_sequence(w, cmd.n);
  json list = json::array();
  std::ostringstream os;
  for (std::size_t i = 0; i < d.size(); ++i) {
    list.push_back(d[i].str());
    os << "d" << i << " = " << d[i].str() << "\n";
  }
  return emit(cmd, {{"w", w.str()}, {"d", list}}, os.str());
}

Outcome do_closure(const Command& cmd) {
  const ClosureReport r = closure_identity_check(*parse_closure_kind(cmd.kind));
  json res = json::array();
  for (const auto& e : r.residuals) res.push_back(e.str());
  json j = {{"kind", to_string(r.kind)}, {"passed", r.passed}, {"equation", r.equation}, {"residuals", res},
            {"kappa", r.kappa ? json(r.kappa->get_str()) : json(nullptr)}, {"remarks", r.remarks}};
  std::ostringstream os;
  os << to_string(r.kind) << ": " << (r.passed ? "pass" : "FAIL") << "\n" << r.equation << "\n";
  if (r.kappa) os << "kappa = " << r.kappa->get_str() << "\n";
  for (const auto& m : r.remarks) os << "note: " << m << "\n";
  return emit(cmd, j, os.str(), r.passed ? 0 : 1);
}

Outcome do_bloch(const Command& cmd) {
  const BlochReduction r = bloch_reduce(parse_expr(read_input(cmd.b1)), parse_expr(read_input(cmd.b2)),
                                        Expr::function("c1"), Expr::function("c2"));
  const Expr psi = Expr::function("psi2");
  const Expr lhs = r.c2 * diff(psi, Var::x, 2) + r.c1 * diff(psi, Var::x) + r.c0 * psi;
  const std::string eq = lhs.str() + " = 0";
  return emit(cmd, {{"coefficients", {r.c2.str(), r.c1.str(), r.c0.str()}}, {"equation", eq}}, eq + "\n");
}

Outcome do_verify(const Command& cmd) {
  const ZeroTest zt = zero_test(cmd);
  const auto results = cmd.suite == "paper"
                           ? paper_suite(zt)
                           : random_suite(cmd.seed.value_or(kDefaultSeed), cmd.trials.value_or(20), zt);
  json list = json::array();
  std::ostringstream os;
  int failed = 0;
  for (const auto& r : results) {
    list.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    os << (r.passed ? "PASS  " : "FAIL  ") << r.name;
    if (!r.detail.empty()) os << "  [" << r.detail << "]";
    os << "\n";
    if (!r.passed) ++failed;
  }
  os << results.size() - failed << "/" << results.size() << " passed\n";
  return emit(cmd, {{"suite", cmd.suite}, {"passed", failed == 0}, {"results", list}}, os.str(), failed ? 1 : 0);
}

bool needs_separator(const std::vector<std::string>& inputs) {
  return std::any_of(inputs.begin(), inputs.end(), [](const std::string& s) { return !s.empty() && s[0] == '-'; });
}

}  // namespace

std::vector<std::string> Command::to_args() const {
  std::vector<std::string> a;
  if (json) a.push_back("--json");
  if (seed) {
    a.push_back("--seed");
    a.push_back(std::to_string(*seed));
  }
  a.push_back(verb);
  if (verb == "factor") {
    if (order) a.insert(a.end(), {"--order", std::to_string(*order)});
    if (root) a.insert(a.end(), {"--root", *root});
  } else if (verb == "invariants") {
    if (hierarchy) a.push_back("--hierarchy");
  } else if (verb == "laplace-chain") {
    a.insert(a.end(), {"--steps", std::to_string(steps), "--direction", direction});
  } else if (verb == "cartan") {
    a.insert(a.end(), {"-N", std::to_string(size)});
    if (periodic) a.push_back("--periodic");
    if (det) a.push_back("--det");
  } else if (verb == "dn") {
    a.insert(a.end(), {"--w", w, "--n", std::to_string(n)});
  } else if (verb == "closure-check") {
    a.insert(a.end(), {"--kind", kind});
  } else if (verb == "bloch") {
    a.insert(a.end(), {"--b1", b1, "--b2", b2});
  } else if (verb == "verify") {
    a.insert(a.end(), {"--suite", suite});
    if (trials) a.insert(a.end(), {"--trials", std::to_string(*trials)});
  }
  if (!inputs.empty()) {
    if (needs_separator(inputs)) a.push_back("--");
    a.insert(a.end(), inputs.begin(), inputs.end());
  }
  return a;
}

Command parse(const std::vector<std::string>& args) {
  Parser p;
  try {
    return p.parse(args);
  } catch (const CLI::CallForHelp&) {
    Command c;
    c.verb = "help";
    for (const auto* sub : p.app.get_subcommands()) c.inputs = {sub->get_name()};
    return c;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::InvalidArgument, e.what());
  }
}

std::string usage(const std::string& verb) {
  Parser p;
  if (verb.empty()) return p.app.help();
  return p.app.get_subcommand(verb)->help();
}

Outcome run(const Command& cmd) {
  if (cmd.verb == "help") return {0, usage(cmd.inputs.empty() ? "" : cmd.inputs[0]), ""};
  if (cmd.verb == "factor") return do_factor(cmd);
  if (cmd.verb == "invariants") return do_invariants(cmd);
  if (cmd.verb == "laplace-chain") return do_chain(cmd);
  if (cmd.verb == "equiv") return do_equiv(cmd);
  if (cmd.verb == "cartan") return do_cartan(cmd);
  if (cmd.verb == "dn") return do_dn(cmd);
  if (cmd.verb == "closure-check") return do_closure(cmd);
  if (cmd.verb == "bloch") return do_bloch(cmd);
  if (cmd.verb == "verify") return do_verify(cmd);
  throw Error(ErrorCode::InvalidArgument, "unknown command '" + cmd.verb + "'");
}

Outcome run_args(const std::vector<std::string>& args) {
  bool json_mode = std::find(args.begin(), args.end(), "--json") != args.end();
  auto fail = [&](int code, const Error& e) {
    Outcome o;
    o.code = code;
    if (json_mode) {
      o.out = json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump(2) + "\n";
    } else {
      o.err = std::string(e.what()) + "\n";
      if (code == 2) o.err += "run with --help for usage\n";
    }
    return o;
  };
  try {
    const Command cmd = parse(args);
    json_mode = cmd.json;
    return run(cmd);
  } catch (const SyntaxError& e) {
    return fail(2, e);
  } catch (const Error& e) {
    return fail(e.code() == ErrorCode::InvalidArgument ? 2 : 1, e);
  } catch (const std::exception& e) {
    return fail(1, Error(ErrorCode::PreconditionViolation, e.what()));
  }
}

}  // namespace lpdo::cli
