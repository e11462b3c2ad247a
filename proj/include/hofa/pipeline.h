#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hofa/decompose.h"
#include "hofa/function.h"
#include "hofa/property.h"

namespace hofa {

struct PipelineConfig {
  int m = 6;
  int degree = 1;     // decomposition degree; Gowers norms are taken at order degree + 1
  int max_depth = 0;
  double tau = 0.2;
  double gamma = 0.15;
  double eta = 0.0;   // <= 0: use tau
  int max_complexity = 12;
  std::uint64_t embedding_samples = 100;
  std::uint64_t seed = 0;
};

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct EmbeddingEvents {
  bool e1 = false;  // degrees and depths survive restriction
  bool e2 = false;  // ||Af2||_2 <= 2 gamma and ||Af3||_U <= 2 eta
  bool e3 = false;  // ||E[Af|B~0] - A E[f|B0]||_inf <= gamma
  double af2_l2 = 0.0;
  double af3_gowers = 0.0;
  double e3_gap = 0.0;
  bool all() const { return e1 && e2 && e3; }
};

struct PipelineReport {
  int order = 2;  // Gowers order used throughout
  double eta = 0.0;
  // f = f1 + f2 + f3 over B0
  int b0_complexity = 0;
  double f2_l2 = 0.0;
  double f3_gowers = 0.0;
  bool f_non_convergence = false;
  // embedding search
  std::uint64_t embeddings_tried = 0;
  std::uint64_t e1_count = 0;
  std::uint64_t e2_count = 0;
  std::uint64_t e3_count = 0;
  std::uint64_t all_count = 0;
  std::int64_t chosen = -1;  // index of the embedding used (-1: none satisfied E1-E3)
  EmbeddingEvents events;
  // h = nearest member of Af, decomposed over B~1 refining B~0
  double af_h_distance = 0.0;
  int b1_complexity = 0;
  double h3_gowers = 0.0;
  bool h_non_convergence = false;
  std::uint64_t unrealized_points = 0;
  std::uint64_t unrealized_atoms = 0;
  double gamma_measured = 0.0;
  double f_g_distance = 0.0;
  std::vector<BoundCheck> checks;

  bool all_hold() const;
};

// Runs the soundness constructions end to end on one instance and measures
// every quantity against its claimed bound.
PipelineReport soundness_pipeline(const FiniteFunction& f, const PropertyOracle& property,
                                  const PipelineConfig& config);

}  // namespace hofa
