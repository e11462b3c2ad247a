#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hofa {

using PointIndex = std::uint32_t;

// Practical cap on p^n for dense tables.
inline constexpr std::uint64_t kMaxPoints = std::uint64_t{1} << 26;

bool is_supported_prime(int p);

// Overflow-checked p^e; returns 0 when the result exceeds `cap`.
std::uint64_t checked_pow(std::uint64_t base, int exponent, std::uint64_t cap);

// The ambient space F_p^n. Point indices enumerate it with coordinate 0
// varying fastest: index = sum_i coords[i] * p^i.
class FieldParams {
 public:
  FieldParams() = default;
  FieldParams(int p, int n);

  int p() const { return p_; }
  int n() const { return n_; }
  std::uint64_t size() const { return size_; }

  std::vector<int> coords(PointIndex index) const;
  PointIndex index(std::span<const int> coords) const;

  PointIndex add(PointIndex a, PointIndex b) const;
  PointIndex sub(PointIndex a, PointIndex b) const;
  PointIndex scale(int c, PointIndex a) const;
  PointIndex basis(int i) const { return static_cast<PointIndex>(powers_[i]); }

  // Table of x + h for every x.
  std::vector<PointIndex> translation(PointIndex h) const;

  friend bool operator==(const FieldParams& a, const FieldParams& b) {
    return a.p_ == b.p_ && a.n_ == b.n_;
  }

 private:
  int p_ = 2;
  int n_ = 0;
  std::uint64_t size_ = 1;
  std::vector<std::uint64_t> powers_;
};

struct Point {
  std::vector<int> coords;
  PointIndex index = 0;
};

std::vector<Point> enumerate_points(const FieldParams& params);

}  // namespace hofa
