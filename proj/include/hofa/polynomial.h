#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hofa/field.h"
#include "hofa/rng.h"
#include "hofa/torsion.h"

namespace hofa {

// c * |x_1|^d_1 ... |x_n|^d_n / p^(depth+1).
struct Monomial {
  std::vector<int> exponents;
  int depth = 0;
  int coefficient = 1;

  int degree(int p) const;
  bool is_constant() const;
};

// Non-classical polynomial F_p^n -> T with zero shift, in the unique monomial
// representation: exponents below p, coefficients in 1..p-1, and no repeated
// (exponents, depth) key. A constant term only exists at depth 0.
class NonClassicalPoly {
 public:
  NonClassicalPoly(FieldParams params, std::vector<Monomial> monomials);

  static NonClassicalPoly zero(FieldParams params) { return NonClassicalPoly(params, {}); }
  // |x_i| / p^(depth+1) with coefficient c.
  static NonClassicalPoly coordinate(FieldParams params, int i, int depth = 0, int c = 1);
  // sum_i a_i |x_i| / p, i.e. the classical linear form <a, x>.
  static NonClassicalPoly linear(FieldParams params, const std::vector<int>& a);

  const FieldParams& params() const { return params_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }

  // 0 for the zero polynomial.
  int degree() const { return degree_; }
  int depth() const { return depth_; }
  bool is_classical() const { return depth_ == 0; }

  TorsionValue evaluate(std::span<const int> x) const;
  TorsionValue evaluate(PointIndex x) const;
  // Values on every point, at level depth().
  TorsionTable table() const;

 private:
  FieldParams params_;
  std::vector<Monomial> monomials_;
  int degree_ = 0;
  int depth_ = 0;
};

// x -> P(x + h) - P(x) as a table.
TorsionTable add_derivative(const NonClassicalPoly& poly, PointIndex h);
double bias(const NonClassicalPoly& poly);

enum class DegreeCheck {
  kAuto,        // basis directions when affordable, otherwise randomized
  kExhaustive,  // every direction tuple, straight from the definition
  kBasis,       // recursion over coordinate directions only (exact)
  kRandomized,  // sampled direction tuples
};

struct DegreeCheckOptions {
  DegreeCheck mode = DegreeCheck::kAuto;
  std::uint64_t samples = 2000;  // randomized mode
  std::uint64_t seed = 0;
  std::uint64_t max_work = std::uint64_t{1} << 32;
};

// True iff every (d+1)-fold additive derivative of the table vanishes.
bool verify_degree(const TorsionTable& table, int d, const DegreeCheckOptions& options = {});
bool verify_degree(const NonClassicalPoly& poly, int d, const DegreeCheckOptions& options = {});

// Smallest d with verify_degree(table, d) in basis mode (-1 for the zero table).
int measured_degree(const TorsionTable& table);

struct MonomialKey {
  std::vector<int> exponents;
  int depth = 0;
};

// Keys (exponents, depth) allowed in a polynomial of degree <= d and depth <= max_depth.
std::vector<MonomialKey> admissible_keys(const FieldParams& params, int max_degree,
                                         int max_depth, bool include_constant = true);

inline constexpr std::uint64_t kMaxEnumeratedPolys = std::uint64_t{1} << 24;

// Number of polynomials of degree <= d and depth <= max_depth (0 past the guard).
std::uint64_t poly_count(const FieldParams& params, int max_degree, int max_depth,
                         bool include_constant = true);

// Every polynomial with degree <= d and depth <= max_depth, exactly once. The
// visitor sees the value table alongside the coefficients; both are updated in
// place between calls (odometer order over admissible keys).
void for_each_poly(const FieldParams& params, int max_degree, int max_depth,
                   const std::function<void(const std::vector<int>& coefficients,
                                            const TorsionTable& table)>& visit,
                   bool include_constant = true);

// Materialized version of for_each_poly.
std::vector<NonClassicalPoly> enumerate_polys(const FieldParams& params, int max_degree,
                                              int max_depth);

// Builds the polynomial for a coefficient vector aligned with admissible_keys().
NonClassicalPoly poly_from_coefficients(const FieldParams& params,
                                        const std::vector<MonomialKey>& keys,
                                        const std::vector<int>& coefficients);

// Uniform coefficients over the non-constant admissible keys.
NonClassicalPoly random_poly(const FieldParams& params, int max_degree, int max_depth,
                             CounterRng& rng);

// Text format: header "p n", then one line "k c d1 ... dn" per monomial.
std::string format_poly(const NonClassicalPoly& poly);
NonClassicalPoly parse_poly(std::istream& in, const std::string& source_name = "<poly>");

}  // namespace hofa
