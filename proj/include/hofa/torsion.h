#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hofa/affine.h"
#include "hofa/field.h"

namespace hofa {

// numerator / p^(level+1) mod 1, an element of U_{level+1} inside R/Z.
struct TorsionValue {
  int p = 2;
  int level = 0;
  std::uint32_t numerator = 0;

  // Same value written at the smallest level that can hold it.
  TorsionValue normalized() const;
  // Same value written at a level >= this->level.
  TorsionValue at_level(int new_level) const;
  double to_double() const;
  std::complex<double> character() const;  // e(x) = exp(2 pi i x)

  friend bool operator==(const TorsionValue& a, const TorsionValue& b);
};

TorsionValue operator+(const TorsionValue& a, const TorsionValue& b);
TorsionValue operator-(const TorsionValue& a, const TorsionValue& b);

// p^(level+1), or 0 if it does not fit in 32 bits.
std::uint32_t torsion_modulus(int p, int level);

// Values of a function F_p^n -> U_{level+1}, stored as numerators.
class TorsionTable {
 public:
  TorsionTable(FieldParams params, int level);
  TorsionTable(FieldParams params, int level, std::vector<std::uint32_t> numerators);

  const FieldParams& params() const { return params_; }
  int level() const { return level_; }
  std::uint32_t modulus() const { return modulus_; }
  std::size_t size() const { return numerators_.size(); }

  std::uint32_t numerator(std::size_t i) const { return numerators_[i]; }
  std::uint32_t& numerator(std::size_t i) { return numerators_[i]; }
  std::span<const std::uint32_t> numerators() const { return numerators_; }
  TorsionValue at(std::size_t i) const { return {params_.p(), level_, numerators_[i]}; }

  bool is_zero() const;
  bool is_constant() const;
  // Smallest level whose denominators cover every value.
  int min_level() const;
  TorsionTable at_level(int new_level) const;

  // x -> T(x + h) - T(x).
  TorsionTable derivative(PointIndex h) const;
  TorsionTable restrict(const AffineMap& map) const;
  TorsionTable scaled(std::uint64_t lambda) const;

  // e(T(x)) for every x.
  std::vector<std::complex<double>> characters() const;
  // |E_x e(T(x))|.
  double bias() const;

  friend bool operator==(const TorsionTable& a, const TorsionTable& b) {
    return a.params_ == b.params_ && a.level_ == b.level_ && a.numerators_ == b.numerators_;
  }

 private:
  FieldParams params_;
  int level_;
  std::uint32_t modulus_;
  std::vector<std::uint32_t> numerators_;
};

// Pointwise sum; the result lives at the larger of the two levels.
TorsionTable operator+(const TorsionTable& a, const TorsionTable& b);
TorsionTable operator-(const TorsionTable& a, const TorsionTable& b);

}  // namespace hofa
