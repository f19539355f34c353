#pragma once

#include <initializer_list>
#include <vector>

#include "tlf/numeric.hpp"

namespace tlf {

// Dense integer matrix, row-major. Dimensions may be zero; the empty
// (0 x 0) matrix is a legal value with det = 1.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, Int(0)) {
    if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  }
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& at(int i, int j) { return e_[index(i, j)]; }
  const Int& at(int i, int j) const { return e_[index(i, j)]; }

  IntMatrix transpose() const;
  bool is_symmetric() const;
  bool is_square() const { return rows_ == cols_; }

  // True when every diagonal entry is even (square matrices only).
  bool has_even_diagonal() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }
  friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }

  // Direct sum: blocks along the diagonal, zeros elsewhere.
  static IntMatrix block_diag(const std::vector<IntMatrix>& blocks);

 private:
  size_t index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw ShapeError("matrix index out of range");
    return static_cast<size_t>(i) * cols_ + j;
  }
  int rows_, cols_;
  std::vector<Int> e_;
};

// Dense rational matrix. Entries are kept canonicalized.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, Rat(0)) {
    if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  }
  explicit RatMatrix(const IntMatrix& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& at(int i, int j) { return e_[index(i, j)]; }
  const Rat& at(int i, int j) const { return e_[index(i, j)]; }

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

 private:
  size_t index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw ShapeError("matrix index out of range");
    return static_cast<size_t>(i) * cols_ + j;
  }
  int rows_, cols_;
  std::vector<Rat> e_;
};

// Smith normal form witness: p * a * q == d with p, q unimodular and d
// diagonal, each nonzero diagonal entry nonnegative and dividing the next.
struct SnfResult {
  IntMatrix p, q, d;
  std::vector<Int> divisors;  // nonzero diagonal entries of d, in order
};

// Determinant by fraction-free (Bareiss) elimination. det of the empty
// matrix is 1.
Int det(const IntMatrix& a);

SnfResult smith_normal_form(const IntMatrix& a);

// Exact inverse over the rationals. Throws SingularError when det == 0.
RatMatrix invert_rational(const IntMatrix& a);

// Signature of a symmetric nonsingular integer matrix, computed by exact
// rational congruence diagonalization. Throws on asymmetric or singular
// input.
int signature(const IntMatrix& a);

// Inverse of a unimodular integer matrix, as an integer matrix.
IntMatrix invert_unimodular(const IntMatrix& a);

}  // namespace tlf
