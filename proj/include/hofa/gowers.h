#pragma once

#include <cstdint>

#include "hofa/function.h"

namespace hofa {

struct GowersEstimate {
  int order = 1;
  double value = 0.0;      // ||f||_{U^d}
  double power = 0.0;      // the pre-root mean, ||f||_{U^d}^(2^d)
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double std_error = 0.0;  // of `power`; 0 in exact mode
  bool clamped = false;    // a negative pre-root mean was clamped to 0
};

// (Delta_h f)(x) = f(x + h) * conj(f(x)).
FiniteFunction mult_derivative(const FiniteFunction& f, PointIndex h);

// Exact work cap for gowers_norm_exact, in units of (p^n)^d.
inline constexpr std::uint64_t kMaxGowersWork = std::uint64_t{1} << 34;

GowersEstimate gowers_norm_exact(const FiniteFunction& f, int order);
GowersEstimate gowers_norm_estimate(const FiniteFunction& f, int order, std::uint64_t samples,
                                    std::uint64_t seed);

// Shorthand for gowers_norm_exact(f, order).value.
double gowers_norm(const FiniteFunction& f, int order);

// Fault injection for the check suite: when enabled, exact norms are distorted.
void set_gowers_sabotage(bool enabled);
bool gowers_sabotage();

}  // namespace hofa
