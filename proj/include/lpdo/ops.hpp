#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpdo/expr.hpp"

namespace lpdo {

Expr diff(const Expr& e, Var v, int n = 1);

/// Bindings from a variable or function name to a replacement. A bound
/// function name also replaces its derivative atoms by the matching
/// derivatives of the replacement. Function atoms are opaque to variable
/// bindings: substituting for x leaves a(x,y) untouched.
using Bindings = std::map<std::string, Expr>;
Expr substitute(const Expr& e, const Bindings& bindings);

/// Replaces every occurrence of the atom `atom` (Sym, Fun, Log or Exp node).
Expr replace(const Expr& e, const Expr& atom, const Expr& value);

/// Rebuilds e bottom-up, mapping each Sym and Fun leaf through f.
Expr map_leaves(const Expr& e, const std::function<Expr(const Expr&)>& f);

/// Antiderivative in v with zero constant of integration; e must be a
/// polynomial in v whose coefficients do not depend on v.
Expr integrate_poly(const Expr& e, Var v);

/// Sum of the terms of e carrying atom^n, divided by atom^n. n = 0 selects the
/// terms free of the atom.
Expr coefficient_of(const Expr& e, const Expr& atom, long n = 1);

Expr swap_xy(const Expr& e);

bool free_of(const Expr& e, Var v);
bool is_constant(const Expr& e);  // free of x and y
bool has_functions(const Expr& e);

/// All distinct Sym, Fun, Log and Exp nodes reachable from e, sorted.
std::vector<Expr> atoms(const Expr& e);

inline Expr var_x() { return Expr::var(Var::x); }
inline Expr var_y() { return Expr::var(Var::y); }

}  // namespace lpdo
