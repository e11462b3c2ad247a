#include "hofa/field.h"

#include <string>

#include "hofa/error.h"

namespace hofa {

bool is_supported_prime(int p) { return p == 2 || p == 3 || p == 5; }

std::uint64_t checked_pow(std::uint64_t base, int exponent, std::uint64_t cap) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > cap / base) return 0;
    result *= base;
  }
  return result <= cap ? result : 0;
}

FieldParams::FieldParams(int p, int n) : p_(p), n_(n) {
  require(is_supported_prime(p), ErrorCode::kInvalidArgument,
          "unsupported prime p=" + std::to_string(p) + " (supported: 2, 3, 5)");
  require(n >= 0, ErrorCode::kDimension, "negative dimension n=" + std::to_string(n));
  size_ = checked_pow(p, n, kMaxPoints);
  require(size_ != 0, ErrorCode::kCapacityExceeded,
          "p^n exceeds the dense-table cap of 2^26 (p=" + std::to_string(p) +
              ", n=" + std::to_string(n) + ")");
  powers_.resize(n + 1);
  powers_[0] = 1;
  for (int i = 1; i <= n; ++i) powers_[i] = powers_[i - 1] * p;
}

std::vector<int> FieldParams::coords(PointIndex index) const {
  std::vector<int> c(n_);
  for (int i = 0; i < n_; ++i) {
    c[i] = static_cast<int>(index % p_);
    index /= p_;
  }
  return c;
}

PointIndex FieldParams::index(std::span<const int> coords) const {
  require(static_cast<int>(coords.size()) == n_, ErrorCode::kDimension,
          "point has " + std::to_string(coords.size()) + " coordinates, expected " +
              std::to_string(n_));
  std::uint64_t idx = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    const int c = ((coords[i] % p_) + p_) % p_;
    idx = idx * p_ + c;
  }
  return static_cast<PointIndex>(idx);
}

PointIndex FieldParams::add(PointIndex a, PointIndex b) const {
  if (p_ == 2) return a ^ b;
  PointIndex result = 0;
  for (int i = 0; i < n_; ++i) {
    const int s = static_cast<int>(a % p_ + b % p_) % p_;
    result += static_cast<PointIndex>(s * powers_[i]);
    a /= p_;
    b /= p_;
  }
  return result;
}

PointIndex FieldParams::sub(PointIndex a, PointIndex b) const {
  if (p_ == 2) return a ^ b;
  PointIndex result = 0;
  for (int i = 0; i < n_; ++i) {
    const int s = static_cast<int>(a % p_ + p_ - b % p_) % p_;
    result += static_cast<PointIndex>(s * powers_[i]);
    a /= p_;
    b /= p_;
  }
  return result;
}

PointIndex FieldParams::scale(int c, PointIndex a) const {
  c = ((c % p_) + p_) % p_;
  PointIndex result = 0;
  for (int i = 0; i < n_; ++i) {
    const int s = static_cast<int>((a % p_) * c) % p_;
    result += static_cast<PointIndex>(s * powers_[i]);
    a /= p_;
  }
  return result;
}

std::vector<PointIndex> FieldParams::translation(PointIndex h) const {
  std::vector<PointIndex> table(size_);
  if (p_ == 2) {
    for (PointIndex x = 0; x < size_; ++x) table[x] = x ^ h;
    return table;
  }
  // Odometer over x, tracking the digits of x + h.
  const std::vector<int> hd = coords(h);
  std::vector<int> xd(n_, 0);
  std::uint64_t shifted = h;
  for (std::uint64_t x = 0; x < size_; ++x) {
    table[x] = static_cast<PointIndex>(shifted);
    for (int i = 0; i < n_; ++i) {
      const int before = (xd[i] + hd[i]) % p_;
      xd[i] = (xd[i] + 1) % p_;
      const int after = (xd[i] + hd[i]) % p_;
      shifted = shifted - before * powers_[i] + after * powers_[i];
      if (xd[i] != 0) break;
    }
  }
  return table;
}

std::vector<Point> enumerate_points(const FieldParams& params) {
  std::vector<Point> points;
  points.reserve(params.size());
  for (std::uint64_t i = 0; i < params.size(); ++i) {
    const auto idx = static_cast<PointIndex>(i);
    points.push_back(Point{params.coords(idx), idx});
  }
  return points;
}

}  // namespace hofa
