#pragma once

#include <cstdint>

#include "hofa/factor.h"
#include "hofa/function.h"

namespace hofa {

// Relabels Gamma(P_1, ..., P_C) on one space as Gamma(Q_1, ..., Q_C) on another.
class TransferOperator {
 public:
  // Throws SignatureMismatch unless degrees and depths agree index by index.
  TransferOperator(PolynomialFactor source, PolynomialFactor target);

  const PolynomialFactor& source() const { return source_; }
  const PolynomialFactor& target() const { return target_; }

 private:
  PolynomialFactor source_;
  PolynomialFactor target_;
};

struct TransferResult {
  FiniteFunction value;
  // Target points whose label no source point realizes; Gamma is taken as 0 there.
  std::uint64_t unrealized_points = 0;
  std::uint64_t unrealized_atoms = 0;
};

// Throws NotMeasurable when phi is not constant on the source atoms.
TransferResult transfer(const TransferOperator& op, const FiniteFunction& phi);

// Repair of f inside the atoms of `factor` so that its atom means become phi
// while moving f as little as possible in L1.
FiniteFunction construct_psi(const FiniteFunction& f, const PolynomialFactor& factor,
                             const FiniteFunction& phi);

}  // namespace hofa
