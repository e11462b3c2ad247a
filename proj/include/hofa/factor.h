#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hofa/affine.h"
#include "hofa/function.h"
#include "hofa/polynomial.h"
#include "hofa/torsion.h"

namespace hofa {

// One defining polynomial of a factor. `table` is stored at level `depth`.
struct FactorPoly {
  TorsionTable table;
  int degree = 0;
  int depth = 0;
  std::optional<NonClassicalPoly> poly;  // when built from coefficients
};

struct PolySignature {
  int degree = 0;
  int depth = 0;
  friend bool operator==(const PolySignature&, const PolySignature&) = default;
};

// Order above which label arithmetic would overflow.
inline constexpr std::uint64_t kMaxFactorOrder = std::uint64_t{1} << 48;

// Partition of F_p^n by the joint values of P_1, ..., P_C. An atom label packs
// (P_1(x), ..., P_C(x)) in mixed radix with digit i ranging over p^(k_i+1);
// dense atom ids number the nonempty atoms by first appearance.
class PolynomialFactor {
 public:
  explicit PolynomialFactor(FieldParams params);
  PolynomialFactor(FieldParams params, const std::vector<NonClassicalPoly>& polys);

  // Degree and depth come from the coefficient representation.
  void add(const NonClassicalPoly& poly);
  // Degree and depth are measured from the table.
  void add_table(const TorsionTable& table);
  // Declared signature; the table must fit at the given depth.
  void add_table(const TorsionTable& table, PolySignature signature);

  const FieldParams& params() const { return params_; }
  int complexity() const { return static_cast<int>(polys_.size()); }
  // max degree (0 for the empty factor)
  int degree() const;
  // prod p^(k_i+1)
  std::uint64_t order() const { return order_; }
  const std::vector<FactorPoly>& polys() const { return polys_; }
  std::vector<PolySignature> signature() const;

  std::uint64_t label(PointIndex x) const { return labels_[x]; }
  const std::vector<std::uint64_t>& labels() const { return labels_; }
  std::vector<TorsionValue> decode(std::uint64_t label) const;
  std::uint64_t encode(const std::vector<TorsionValue>& values) const;

  std::uint32_t atom_id(PointIndex x) const { return atom_ids_[x]; }
  const std::vector<std::uint32_t>& atom_ids() const { return atom_ids_; }
  std::size_t atom_count() const { return atom_labels_.size(); }
  std::uint64_t atom_label(std::uint32_t id) const { return atom_labels_[id]; }
  std::uint64_t atom_size(std::uint32_t id) const { return atom_sizes_[id]; }
  // Dense id of a label, or nullopt for an empty atom.
  std::optional<std::uint32_t> find_atom(std::uint64_t label) const;

  // Factor over F_p^k defined by P_i o A (signatures measured afresh).
  PolynomialFactor restrict(const AffineMap& map) const;

 private:
  void append(FactorPoly poly);
  void rebuild_atoms();

  FieldParams params_;
  std::vector<FactorPoly> polys_;
  std::vector<std::uint64_t> radix_;
  std::uint64_t order_ = 1;
  std::vector<std::uint64_t> labels_;
  std::vector<std::uint32_t> atom_ids_;
  std::vector<std::uint64_t> atom_labels_;
  std::vector<std::uint64_t> atom_sizes_;
  std::map<std::uint64_t, std::uint32_t> label_to_atom_;
};

// (P_1(x), ..., P_C(x)).
std::vector<TorsionValue> atom_of(const PolynomialFactor& factor, PointIndex x);

// Mean of f over every nonempty atom, by dense atom id.
std::vector<double> atom_means(const FiniteFunction& f, const PolynomialFactor& factor);
// E[f|B]: constant on atoms, equal to the atom mean.
FiniteFunction cond_expectation(const FiniteFunction& f, const PolynomialFactor& factor);
// Whether f is constant on every atom (within tol).
bool is_measurable(const FiniteFunction& f, const PolynomialFactor& factor, double tol = 1e-12);

struct AtomStats {
  std::map<std::uint64_t, double> probabilities;  // nonempty atoms only
  std::uint64_t order = 1;
  std::size_t nonempty = 0;
  // max over all labels (empty ones included) of |Pr[atom] - 1/order|
  double max_deviation = 0.0;
};
AtomStats atom_stats(const PolynomialFactor& factor);

struct RankProxy {
  double max_bias = 0.0;
  std::vector<std::uint64_t> worst_lambda;  // argmax of the bias
  int gowers_order = 0;                     // 0 when the Gowers surrogate was skipped
  double max_gowers = 0.0;
  std::uint64_t combinations = 0;
};

inline constexpr std::uint64_t kMaxRankCombinations = std::uint64_t{1} << 20;

// Max over nontrivial lambda of bias(sum lambda_i P_i), plus the max of
// ||e(sum lambda_i P_i)||_{U^max(1,deg B)} when `with_gowers` is set.
RankProxy factor_rank_proxy(const PolynomialFactor& factor, bool with_gowers = true);

// Every atom of `fine` lies inside a single atom of `coarse`.
bool is_semantic_refinement(const PolynomialFactor& fine, const PolynomialFactor& coarse);

// Factor file: header "p n C", then C polynomial blocks. Every polynomial must
// carry its coefficient representation.
std::string format_factor(const PolynomialFactor& factor);
PolynomialFactor parse_factor(std::istream& in, const std::string& source_name = "<factor>");

}  // namespace hofa
