#pragma once

#include <cstdint>
#include <vector>

#include "hofa/function.h"
#include "hofa/property.h"

namespace hofa {

struct TesterConfig {
  double delta = 0.0;
  double eps = 0.1;
  int m = 1;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;

  // Accept a trial when dist(Af, P) < delta + eps / 2.
  double threshold() const { return delta + eps / 2.0; }
};

struct TesterResult {
  std::vector<double> distances;  // dist(Af, P), one per trial
  double threshold = 0.0;
  std::uint64_t accepted = 0;
  double accept_fraction = 0.0;
  bool accept = false;  // majority verdict
};

// Restricts f to cfg.trials random m-dimensional affine subspaces and compares
// each exact distance to the property against the threshold.
TesterResult distance_tester(const FiniteFunction& f, const PropertyOracle& property,
                             const TesterConfig& cfg);

}  // namespace hofa
