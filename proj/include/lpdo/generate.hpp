#pragma once

#include <cstdint>
#include <random>

#include "lpdo/lpdo.hpp"

namespace lpdo {

/// Random integer-polynomial data for property checks.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi);
  int nonzero(int lo, int hi);

  /// Polynomial in x, y of total degree <= max_degree, coefficients in
  /// [-bound, bound].
  Expr poly(int max_degree = 2, int bound = 3);

  /// alpha*Dx + beta*Dy + gamma with alpha a nonzero integer constant.
  Lpdo first_order();
  /// Every coefficient of order <= 2 random, principal ones included.
  Lpdo second_order();

  /// Order-2 normal form Dx*Dy + a*Dx + b*Dy + c.
  Lpdo hyperbolic();

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Root of the principal symbol of a first-order alpha*Dx + beta*Dy + ...,
/// i.e. the w with alpha*(Dx - w*Dy) = alpha*Dx + beta*Dy.
Expr left_root(const Lpdo& first);

}  // namespace lpdo
