#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hofa/affine.h"
#include "hofa/field.h"
#include "hofa/rng.h"

namespace hofa {

using Complex = std::complex<double>;

enum class RangeKind {
  kFinite,   // {0, ..., R-1}
  kUnit,     // real [0, 1]
  kSigned,   // real [-1, 1]
  kComplex,  // complex unit disc
};

std::string range_kind_name(RangeKind kind);

// Dense value table of f: F_p^n -> V in canonical point order.
class FiniteFunction {
 public:
  static FiniteFunction finite(FieldParams params, int alphabet, std::vector<std::uint8_t> values);
  static FiniteFunction real(FieldParams params, std::vector<double> values,
                             RangeKind kind = RangeKind::kUnit);
  static FiniteFunction complex(FieldParams params, std::vector<Complex> values);
  // Picks kUnit when every value is in [0,1], else kSigned.
  static FiniteFunction real_auto(FieldParams params, std::vector<double> values);

  static FiniteFunction constant_finite(FieldParams params, int alphabet, int value);
  static FiniteFunction constant_real(FieldParams params, double value);

  const FieldParams& params() const { return params_; }
  RangeKind kind() const { return kind_; }
  int alphabet() const { return alphabet_; }
  std::size_t size() const { return static_cast<std::size_t>(params_.size()); }

  bool is_finite() const { return kind_ == RangeKind::kFinite; }
  bool is_real() const { return kind_ == RangeKind::kUnit || kind_ == RangeKind::kSigned; }
  bool is_complex() const { return kind_ == RangeKind::kComplex; }
  // Finite with alphabet 2.
  bool is_boolean() const { return is_finite() && alphabet_ == 2; }

  int finite_at(std::size_t i) const { return std::get<0>(values_)[i]; }
  double real_at(std::size_t i) const;
  Complex complex_at(std::size_t i) const;

  std::span<const std::uint8_t> finite_values() const { return std::get<0>(values_); }
  std::span<const double> real_values() const { return std::get<1>(values_); }
  std::span<const Complex> complex_values() const { return std::get<2>(values_); }

  // Views as real or complex tables (complex input rejected by to_real()).
  std::vector<double> to_real() const;
  std::vector<Complex> to_complex() const;

  // Same values, real-valued range ({0,1} tables become kUnit).
  FiniteFunction as_real() const;

 private:
  FiniteFunction(FieldParams params, RangeKind kind, int alphabet,
                 std::variant<std::vector<std::uint8_t>, std::vector<double>, std::vector<Complex>>
                     values);

  FieldParams params_;
  RangeKind kind_;
  int alphabet_ = 0;
  std::variant<std::vector<std::uint8_t>, std::vector<double>, std::vector<Complex>> values_;
};

// g(x) = f(A(x)); the range is preserved.
FiniteFunction restrict(const FiniteFunction& f, const AffineMap& map);

// f - g as a real table in [-1, 1] (or kSigned clamp-free if wider).
FiniteFunction subtract(const FiniteFunction& f, const FiniteFunction& g);

double l1_norm(const FiniteFunction& f);
double l2_norm(const FiniteFunction& f);
double linf_norm(const FiniteFunction& f);
double mean(const FiniteFunction& f);

// E_x |f(x) - g(x)|. Exact integer accumulation when both tables are finite.
double l1_distance(const FiniteFunction& f, const FiniteFunction& g);
double l2_distance(const FiniteFunction& f, const FiniteFunction& g);
double linf_distance(const FiniteFunction& f, const FiniteFunction& g);
// Fraction of points where the values differ (finite tables).
double hamming_distance(const FiniteFunction& f, const FiniteFunction& g);

// Independent Bernoulli(f(x)) draws, one per point in canonical order.
FiniteFunction round_randomized(const FiniteFunction& f, CounterRng& rng);

// Indicator of {x : f(x) = i} for every symbol i of a finite function.
std::vector<FiniteFunction> indicator_slices(const FiniteFunction& f);
// sum_i i * slice_i; inverse of indicator_slices.
FiniteFunction combine_slices(std::span<const FiniteFunction> slices);

// Seeded random tables: uniform symbols, or uniform reals over the range.
FiniteFunction random_finite(const FieldParams& params, int alphabet, CounterRng& rng);
FiniteFunction random_real(const FieldParams& params, RangeKind kind, CounterRng& rng);

// Text format: header "p n R" or "p n real", then p^n values.
std::string format_function(const FiniteFunction& f);
FiniteFunction parse_function(std::istream& in, const std::string& source_name = "<function>");
// Concatenated function blocks until end of input.
std::vector<FiniteFunction> parse_function_blocks(std::istream& in,
                                                  const std::string& source_name = "<functions>");

// Compensated (Neumaier) summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace hofa
