#pragma once

#include <span>
#include <vector>

namespace hofa {

int mod_p(long long a, int p);
int inverse_mod_p(int a, int p);

// Dense matrix over F_p, row-major.
class ModMatrix {
 public:
  ModMatrix(int p, int rows, int cols);

  int p() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  int& at(int r, int c) { return data_[r * cols_ + c]; }
  int at(int r, int c) const { return data_[r * cols_ + c]; }

 private:
  int p_;
  int rows_;
  int cols_;
  std::vector<int> data_;
};

struct EchelonForm {
  ModMatrix reduced;           // reduced row echelon form
  std::vector<int> pivot_cols; // one per nonzero row
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

EchelonForm row_reduce(ModMatrix m);
int rank(const ModMatrix& m);

// Rank of a family of vectors of equal length.
int rank_of(int p, std::span<const std::vector<int>> vectors);
bool in_span(int p, std::span<const std::vector<int>> vectors, std::span<const int> target);

}  // namespace hofa
