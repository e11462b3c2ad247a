#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hofa {

enum class CheckScale { kSmall, kMedium };

struct CheckResult {
  std::string name;
  std::uint64_t instances = 0;
  std::uint64_t violations = 0;
  double min_slack = 0.0;  // smallest rhs - lhs seen (negative on violation)
  bool passed() const { return violations == 0; }
};

// Runs the inequality battery on seeded random instances.
std::vector<CheckResult> run_check_suite(CheckScale scale, std::uint64_t seed);

// sum_alpha |f^(alpha)|^4 for real f on F_p^n, by a direct character sum.
double fourier_fourth_moment(const std::vector<double>& values, int p, int n);

}  // namespace hofa
