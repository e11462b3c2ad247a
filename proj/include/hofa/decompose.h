#pragma once

#include <vector>

#include "hofa/factor.h"
#include "hofa/function.h"

namespace hofa {

struct DecomposeOptions {
  int degree = 1;          // candidates have degree <= degree; f3 is measured in U^(degree+1)
  int max_depth = 0;       // candidate depth bound
  double tau = 0.1;        // correlation threshold
  int max_complexity = 12;
};

struct Decomposition {
  FiniteFunction f1;  // E[f|B1]
  FiniteFunction f2;
  FiniteFunction f3;
  PolynomialFactor factor;
  int initial_complexity = 0;  // polys 0..initial_complexity-1 come from B0
  double f2_l2 = 0.0;
  int f3_order = 2;
  double f3_gowers = 0.0;
  std::vector<double> energies;      // ||E[f|B]||_2^2 after each step, starting at B0
  std::vector<double> correlations;  // |<f - E[f|B], e(Q)>| of each adjoined Q
  bool non_convergence = false;      // stopped at the complexity cap
};

// Energy-increment decomposition starting from `initial`. Each step adjoins the
// candidate Q (degree <= d, depth <= max_depth, no constant term) maximizing
// |<f - E[f|B], e(Q)>|, as long as that is at least tau.
Decomposition decompose(const FiniteFunction& f, const DecomposeOptions& options,
                        const PolynomialFactor& initial);
Decomposition decompose(const FiniteFunction& f, const DecomposeOptions& options);

struct RefinementReport {
  double lhs = 0.0;  // ||E[f|B] - E[f|B']||_1
  double rhs = 0.0;  // ||f2||_2 + p^(d C') ||f3||_{U^(d+1)}
  bool holds = false;
};

// Throws NotARefinement when `fine` is not a semantic refinement of `coarse`.
RefinementReport refinement_error(const FiniteFunction& f, const PolynomialFactor& coarse,
                                  const PolynomialFactor& fine, const FiniteFunction& f2,
                                  const FiniteFunction& f3, int d);

}  // namespace hofa
