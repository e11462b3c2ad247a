#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hofa/field.h"
#include "hofa/rng.h"

namespace hofa {

// x -> L x + c from F_p^k to F_p^n. The linear part is stored by columns:
// columns()[i] is the image of the i-th source basis vector.
class AffineMap {
 public:
  AffineMap(int p, int source_dim, int target_dim, std::vector<std::vector<int>> columns,
            std::vector<int> shift);

  static AffineMap identity(int p, int n);

  int p() const { return p_; }
  int source_dim() const { return source_dim_; }
  int target_dim() const { return target_dim_; }
  FieldParams source_params() const { return FieldParams(p_, source_dim_); }
  FieldParams target_params() const { return FieldParams(p_, target_dim_); }

  const std::vector<std::vector<int>>& columns() const { return columns_; }
  const std::vector<int>& shift() const { return shift_; }

  std::vector<int> apply(std::span<const int> x) const;
  PointIndex apply_index(PointIndex x) const;

  // Image of every source point, in canonical source order.
  std::vector<PointIndex> point_table() const;

  int linear_rank() const;
  bool is_injective() const { return linear_rank() == source_dim_; }

  friend bool operator==(const AffineMap& a, const AffineMap& b) {
    return a.p_ == b.p_ && a.source_dim_ == b.source_dim_ && a.target_dim_ == b.target_dim_ &&
           a.columns_ == b.columns_ && a.shift_ == b.shift_;
  }

 private:
  int p_;
  int source_dim_;
  int target_dim_;
  std::vector<std::vector<int>> columns_;
  std::vector<int> shift_;
};

// outer ∘ inner.
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

// Uniform injective affine map F_p^k -> F_p^n, by rejection on the linear part.
AffineMap sample_affine_embedding(CounterRng& rng, int k, int n, int p);

// Number of injective affine maps F_p^k -> F_p^n: p^n * prod_{i<k} (p^n - p^i).
// Returns 0 on overflow past `cap`.
std::uint64_t embedding_count(int p, int k, int n, std::uint64_t cap);

// Visits every injective affine map F_p^k -> F_p^n through its point table.
// Order: shift outermost (canonical order), then columns lexicographically.
void for_each_embedding(int p, int k, int n,
                        const std::function<void(std::span<const PointIndex>)>& visit);

// A': F_p^n -> F_p^m with A'(A(x)) = x for every x in F_p^m. Built from the
// pivot rows of the linear part; deterministic.
AffineMap section_of(const AffineMap& embedding);

std::string format_affine_map(const AffineMap& map);
AffineMap parse_affine_map(std::istream& in, const std::string& source_name = "<map>");

}  // namespace hofa
