#include "hofa/linalg.h"

#include <utility>

#include "hofa/error.h"

namespace hofa {

int mod_p(long long a, int p) {
  const long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int inverse_mod_p(int a, int p) {
  a = mod_p(a, p);
  require(a != 0, ErrorCode::kInvalidArgument, "zero has no inverse mod p");
  for (int x = 1; x < p; ++x) {
    if ((a * x) % p == 1) return x;
  }
  fail(ErrorCode::kInvalidArgument, "modulus is not prime");
}

ModMatrix::ModMatrix(int p, int rows, int cols)
    : p_(p), rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}

EchelonForm row_reduce(ModMatrix m) {
  const int p = m.p();
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int sel = -1;
    for (int r = row; r < m.rows(); ++r) {
      if (m.at(r, col) != 0) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != row) {
      for (int c = 0; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(row, c));
    }
    const int inv = inverse_mod_p(m.at(row, col), p);
    for (int c = 0; c < m.cols(); ++c) m.at(row, c) = (m.at(row, c) * inv) % p;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m.at(r, col) == 0) continue;
      const int factor = m.at(r, col);
      for (int c = 0; c < m.cols(); ++c) {
        m.at(r, c) = mod_p(m.at(r, c) - factor * m.at(row, c), p);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return EchelonForm{std::move(m), std::move(pivots)};
}

int rank(const ModMatrix& m) { return row_reduce(m).rank(); }

int rank_of(int p, std::span<const std::vector<int>> vectors) {
  if (vectors.empty()) return 0;
  const int len = static_cast<int>(vectors.front().size());
  ModMatrix m(p, static_cast<int>(vectors.size()), len);
  for (int r = 0; r < m.rows(); ++r) {
    require(static_cast<int>(vectors[r].size()) == len, ErrorCode::kDimension,
            "vectors of unequal length");
    for (int c = 0; c < len; ++c) m.at(r, c) = mod_p(vectors[r][c], p);
  }
  return rank(m);
}

bool in_span(int p, std::span<const std::vector<int>> vectors, std::span<const int> target) {
  bool zero = true;
  for (int v : target) zero = zero && mod_p(v, p) == 0;
  if (zero) return true;
  if (vectors.empty()) return false;
  std::vector<std::vector<int>> extended(vectors.begin(), vectors.end());
  const int before = rank_of(p, extended);
  extended.emplace_back(target.begin(), target.end());
  return rank_of(p, extended) == before;
}

}  // namespace hofa
