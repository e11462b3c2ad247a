#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hofa/function.h"

namespace hofa {

// Outcome v: F_p^k -> {0,1} packed with bit i = v(point i).
using OutcomeKey = std::uint64_t;

struct RestrictionDistribution {
  int p = 2;
  int k = 0;
  std::map<OutcomeKey, double> probs;  // zero-probability outcomes omitted
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  double prob(OutcomeKey v) const;
  double total() const;
};

inline constexpr std::uint64_t kMaxExactEmbeddings = std::uint64_t{1} << 24;

// Law of f o A for a uniform affine embedding A: F_p^k -> F_p^n, by enumerating
// every embedding. [0,1]-valued f uses the product formula over points.
RestrictionDistribution mu_exact(const FiniteFunction& f, int k);
// Empirical version from `samples` embeddings (plus roundings for [0,1]-valued f).
RestrictionDistribution mu_estimate(const FiniteFunction& f, int k, std::uint64_t samples,
                                    std::uint64_t seed);

// Total variation: half the L1 distance.
double stat_distance(const RestrictionDistribution& a, const RestrictionDistribution& b);

// Linear forms in k variables over F_p.
struct LinearFormSystem {
  int p = 2;
  int k = 0;
  std::vector<std::vector<int>> forms;

  bool has_duplicates() const;
};

// {(1, a_1, ..., a_k) : a in F_p^k}: the points of a k-dimensional affine subspace.
LinearFormSystem affine_subspace_system(int p, int k);

inline constexpr std::size_t kMaxComplexityForms = 12;

// Minimal s such that, for every i, the other forms split into s + 1 parts none
// of whose spans contains L_i. nullopt when no such s exists (L_i lies in the
// span of a single other form, or is zero).
std::optional<int> cs_complexity(const LinearFormSystem& system);

// E_{x_1..x_k in F_p^n} prod_i f_i(L_i(x_1, ..., x_k)), by brute force.
double linear_form_average(const LinearFormSystem& system, std::span<const FiniteFunction> fs);

struct LipschitzReport {
  int order = 0;                // d = p^k + 1
  double gowers = 0.0;          // ||f - g||_{U^d}
  double max_outcome_gap = 0.0; // max_v |mu_f[v] - mu_g[v]|
  double outcome_bound = 0.0;   // p^k ||f - g||_{U^d}
  double distance = 0.0;        // stat_distance(mu_f, mu_g)
  double distance_bound = 0.0;  // 2^(p^k) p^k ||f - g||_{U^d}
  bool holds = false;
};

LipschitzReport mu_lipschitz_check(const FiniteFunction& f, const FiniteFunction& g, int k);

}  // namespace hofa
