#pragma once

#include <cstdint>
#include <random>

#include "ik/syntax.hpp"

namespace ik {

using Rng = std::mt19937_64;

/// Shape parameters for random formulas.
struct FormulaGenOptions {
  std::size_t max_depth = 3;
  std::size_t max_width = 3;
  std::size_t max_block = 2;
  bool implications = true;
  bool universals = true;
  bool existentials = true;
  bool equality = true;
};

/// Random well-sorted formula over `sig` whose free variables are drawn from
/// `scope`. Quantified variables get fresh user-level names `q0`, `q1`, ...
Formula random_formula(Rng& rng, const Signature& sig, const Context& scope,
                       const FormulaGenOptions& opts = {});

/// Random term of the given sort over `scope` and the signature's functions.
Term random_term(Rng& rng, const Signature& sig, const Context& scope, const std::string& sort,
                 std::size_t depth = 1);

/// Small two-sorted signature with relations, constants and a unary function.
Signature sample_signature();

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

}  // namespace ik
