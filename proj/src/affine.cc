#include "hofa/affine.h"

#include <istream>
#include <sstream>

#include "hofa/error.h"
#include "hofa/linalg.h"
#include "text_reader.h"

namespace hofa {

AffineMap::AffineMap(int p, int source_dim, int target_dim, std::vector<std::vector<int>> columns,
                     std::vector<int> shift)
    : p_(p),
      source_dim_(source_dim),
      target_dim_(target_dim),
      columns_(std::move(columns)),
      shift_(std::move(shift)) {
  require(is_supported_prime(p), ErrorCode::kInvalidArgument, "unsupported prime");
  require(source_dim >= 0 && target_dim >= 0, ErrorCode::kDimension, "negative dimension");
  require(static_cast<int>(columns_.size()) == source_dim, ErrorCode::kDimension,
          "affine map needs one column per source coordinate");
  for (auto& col : columns_) {
    require(static_cast<int>(col.size()) == target_dim, ErrorCode::kDimension,
            "affine map column has wrong length");
    for (int& v : col) v = mod_p(v, p);
  }
  require(static_cast<int>(shift_.size()) == target_dim, ErrorCode::kDimension,
          "affine map shift has wrong length");
  for (int& v : shift_) v = mod_p(v, p);
}

AffineMap AffineMap::identity(int p, int n) {
  std::vector<std::vector<int>> cols(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) cols[i][i] = 1;
  return AffineMap(p, n, n, std::move(cols), std::vector<int>(n, 0));
}

std::vector<int> AffineMap::apply(std::span<const int> x) const {
  require(static_cast<int>(x.size()) == source_dim_, ErrorCode::kDimension,
          "point dimension does not match the map's source");
  std::vector<int> y = shift_;
  for (int i = 0; i < source_dim_; ++i) {
    const int xi = mod_p(x[i], p_);
    if (xi == 0) continue;
    for (int j = 0; j < target_dim_; ++j) y[j] = (y[j] + xi * columns_[i][j]) % p_;
  }
  return y;
}

PointIndex AffineMap::apply_index(PointIndex x) const {
  const FieldParams src(p_, source_dim_);
  const FieldParams tgt(p_, target_dim_);
  const auto c = src.coords(x);
  return tgt.index(apply(c));
}

std::vector<PointIndex> AffineMap::point_table() const {
  const FieldParams src(p_, source_dim_);
  const FieldParams tgt(p_, target_dim_);
  std::vector<PointIndex> table(src.size());
  // Each odometer step (increment or wrap of digit i) adds column i mod p.
  std::vector<int> digits(source_dim_, 0);
  std::vector<int> image = shift_;
  for (std::uint64_t x = 0; x < src.size(); ++x) {
    table[x] = tgt.index(image);
    for (int i = 0; i < source_dim_; ++i) {
      digits[i] = (digits[i] + 1) % p_;
      for (int j = 0; j < target_dim_; ++j) image[j] = (image[j] + columns_[i][j]) % p_;
      if (digits[i] != 0) break;
    }
  }
  return table;
}

int AffineMap::linear_rank() const { return rank_of(p_, columns_); }

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  require(outer.p() == inner.p() && outer.source_dim() == inner.target_dim(),
          ErrorCode::kDimension, "cannot compose affine maps with mismatched dimensions");
  std::vector<std::vector<int>> cols;
  cols.reserve(inner.source_dim());
  const std::vector<int> zero(outer.source_dim(), 0);
  const std::vector<int> base = outer.apply(zero);
  for (const auto& col : inner.columns()) {
    auto img = outer.apply(col);
    for (int j = 0; j < outer.target_dim(); ++j) img[j] = mod_p(img[j] - base[j], outer.p());
    cols.push_back(std::move(img));
  }
  return AffineMap(outer.p(), inner.source_dim(), outer.target_dim(), std::move(cols),
                   outer.apply(inner.shift()));
}

AffineMap sample_affine_embedding(CounterRng& rng, int k, int n, int p) {
  require(k >= 0 && n >= 0, ErrorCode::kDimension, "negative dimension");
  require(k <= n, ErrorCode::kDimension,
          "cannot embed F_p^" + std::to_string(k) + " into F_p^" + std::to_string(n));
  require(is_supported_prime(p), ErrorCode::kInvalidArgument, "unsupported prime");
  std::vector<std::vector<int>> cols(k, std::vector<int>(n));
  do {
    for (auto& col : cols) {
      for (int& v : col) v = static_cast<int>(rng.uniform_below(p));
    }
  } while (rank_of(p, cols) < k);
  std::vector<int> shift(n);
  for (int& v : shift) v = static_cast<int>(rng.uniform_below(p));
  return AffineMap(p, k, n, std::move(cols), std::move(shift));
}

std::uint64_t embedding_count(int p, int k, int n, std::uint64_t cap) {
  const std::uint64_t size = checked_pow(p, n, cap);
  if (size == 0) return 0;
  std::uint64_t count = size;
  std::uint64_t pi = 1;
  for (int i = 0; i < k; ++i) {
    const std::uint64_t factor = size - pi;
    if (factor != 0 && count > cap / factor) return 0;
    count *= factor;
    pi *= p;
  }
  return count;
}

void for_each_embedding(int p, int k, int n,
                        const std::function<void(std::span<const PointIndex>)>& visit) {
  require(k <= n, ErrorCode::kDimension, "embedding source larger than target");
  const FieldParams tgt(p, n);
  const FieldParams src(p, k);
  const std::uint64_t size = tgt.size();
  // Linear images of all source points for the columns chosen so far; a new
  // column is admissible iff it avoids their span.
  std::vector<PointIndex> columns(k);
  std::vector<std::vector<PointIndex>> spans(k + 1);
  spans[0] = {0};
  std::vector<PointIndex> table(src.size());
  std::vector<char> in_span(size, 0);

  std::function<void(int)> choose = [&](int level) {
    if (level == k) {
      const auto& lin = spans[k];
      for (std::uint64_t c = 0; c < size; ++c) {
        for (std::size_t y = 0; y < lin.size(); ++y) {
          table[y] = tgt.add(lin[y], static_cast<PointIndex>(c));
        }
        visit(table);
      }
      return;
    }
    std::fill(in_span.begin(), in_span.end(), 0);
    for (PointIndex v : spans[level]) in_span[v] = 1;
    std::vector<char> blocked = in_span;
    for (std::uint64_t col = 0; col < size; ++col) {
      if (blocked[col]) continue;
      const auto cidx = static_cast<PointIndex>(col);
      columns[level] = cidx;
      // New span indexed so that source digit `level` is most significant.
      auto& next = spans[level + 1];
      next.clear();
      for (int a = 0; a < p; ++a) {
        const PointIndex offset = tgt.scale(a, cidx);
        for (PointIndex v : spans[level]) next.push_back(tgt.add(v, offset));
      }
      choose(level + 1);
    }
  };
  choose(0);
}

AffineMap section_of(const AffineMap& embedding) {
  const int p = embedding.p();
  const int m = embedding.source_dim();
  const int n = embedding.target_dim();
  // Augment [L | I_n]^T style: reduce the m x n matrix whose rows are the
  // columns of L. Pivot columns identify target coordinates on which L is
  // invertible.
  ModMatrix rows(p, m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) rows.at(i, j) = embedding.columns()[i][j];
  }
  const EchelonForm ech = row_reduce(rows);
  require(ech.rank() == m, ErrorCode::kNotInjective,
          "affine map has rank " + std::to_string(ech.rank()) + " < " + std::to_string(m));
  // Square block S[j][i] = L[pivot_j][i]; invert it.
  ModMatrix aug(p, m, 2 * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) aug.at(j, i) = embedding.columns()[i][ech.pivot_cols[j]];
    aug.at(j, m + j) = 1;
  }
  const EchelonForm inv = row_reduce(aug);
  // M = S^{-1} placed on the pivot coordinates; A'(y) = M (y - c).
  std::vector<std::vector<int>> cols(n, std::vector<int>(m, 0));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) cols[ech.pivot_cols[j]][i] = inv.reduced.at(i, m + j);
  }
  std::vector<int> shift(m, 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      shift[i] = mod_p(shift[i] - cols[j][i] * embedding.shift()[j], p);
    }
  }
  return AffineMap(p, n, m, std::move(cols), std::move(shift));
}

std::string format_affine_map(const AffineMap& map) {
  std::ostringstream out;
  out << map.p() << ' ' << map.source_dim() << ' ' << map.target_dim() << '\n';
  auto write_row = [&](const std::vector<int>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  };
  for (const auto& col : map.columns()) write_row(col);
  write_row(map.shift());
  return out.str();
}

AffineMap parse_affine_map(std::istream& in, const std::string& source_name) {
  detail::TextReader reader(in, source_name);
  const int p = reader.next_int("prime p");
  const int k = reader.next_int("source dimension k");
  const int n = reader.next_int("target dimension n");
  if (!is_supported_prime(p)) reader.error("unsupported prime " + std::to_string(p));
  if (k < 0 || n < 0) reader.error("negative dimension");
  std::vector<std::vector<int>> cols(k, std::vector<int>(n));
  for (auto& col : cols) {
    for (int& v : col) {
      v = reader.next_int("matrix entry");
      if (v < 0 || v >= p) reader.error("matrix entry out of range [0, p)");
    }
  }
  std::vector<int> shift(n);
  for (int& v : shift) {
    v = reader.next_int("shift entry");
    if (v < 0 || v >= p) reader.error("shift entry out of range [0, p)");
  }
  reader.expect_end();
  return AffineMap(p, k, n, std::move(cols), std::move(shift));
}

}  // namespace hofa
