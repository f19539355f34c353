#include "tlf/matrix.hpp"

#include <algorithm>
#include <utility>

namespace tlf {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  e_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw ShapeError("ragged initializer");
    for (long v : r) e_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

bool IntMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

bool IntMatrix::has_even_diagonal() const {
  if (!is_square()) throw ShapeError("diagonal of non-square matrix");
  for (int i = 0; i < rows_; ++i)
    if (at(i, i) % 2 != 0) return false;
  return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw ShapeError("dimension mismatch in product");
  IntMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols_; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ShapeError("dimension mismatch in sum");
  IntMatrix c(a.rows_, a.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < a.cols_; ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
  return c;
}

IntMatrix IntMatrix::block_diag(const std::vector<IntMatrix>& blocks) {
  int r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  IntMatrix m(r, c);
  int ro = 0, co = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) m.at(ro + i, co + j) = b.at(i, j);
    ro += b.rows();
    co += b.cols();
  }
  return m;
}

RatMatrix::RatMatrix(const IntMatrix& m) : RatMatrix(m.rows(), m.cols()) {
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) at(i, j) = Rat(m.at(i, j));
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw ShapeError("dimension mismatch in product");
  RatMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      if (a.at(i, k) == 0) continue;
      for (int j = 0; j < b.cols_; ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return c;
}

Int det(const IntMatrix& a) {
  if (!a.is_square()) throw ShapeError("determinant of non-square matrix");
  int n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Int prev(1);
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      for (int j = k; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(m.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m.at(i, k) = 0;
    }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

namespace {

// Integer quotient rounded to the nearest integer (ties away from zero are
// fine here; any nearest choice keeps |remainder| <= |den| / 2).
Int nearest_quotient(const Int& num, const Int& den) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (den > 0) {
    if (2 * r > den) q += 1;
  } else {
    if (2 * r < den) q += 1;
  }
  return q;
}

// Clears row s and column s of d against the pivot at (s, s), then makes
// the pivot divide every remaining entry of the trailing submatrix.
// Row operations are mirrored into p, column operations into q.
void snf_pivot_pass(IntMatrix& d, IntMatrix& p, IntMatrix& q, int s) {
  int r = d.rows(), c = d.cols();
  for (;;) {
    // Move a minimal-magnitude nonzero entry of the trailing block to (s, s).
    int bi = -1, bj = -1;
    for (int i = s; i < r; ++i)
      for (int j = s; j < c; ++j) {
        if (d.at(i, j) == 0) continue;
        if (bi < 0 || cmp(abs(d.at(i, j)), abs(d.at(bi, bj))) < 0) {
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) return;  // trailing block is zero
    if (bi != s)
      for (int j = 0; j < c; ++j) std::swap(d.at(s, j), d.at(bi, j));
    if (bi != s)
      for (int j = 0; j < p.cols(); ++j) std::swap(p.at(s, j), p.at(bi, j));
    if (bj != s)
      for (int i = 0; i < r; ++i) std::swap(d.at(i, s), d.at(i, bj));
    if (bj != s)
      for (int i = 0; i < q.rows(); ++i) std::swap(q.at(i, s), q.at(i, bj));

    bool dirty = false;
    for (int i = s + 1; i < r; ++i) {
      if (d.at(i, s) == 0) continue;
      Int f = nearest_quotient(d.at(i, s), d.at(s, s));
      if (f == 0) {
        // Entry became smaller than the pivot mid-pass; re-pivot on it.
        dirty = true;
        continue;
      }
      for (int j = 0; j < c; ++j) d.at(i, j) -= f * d.at(s, j);
      for (int j = 0; j < p.cols(); ++j) p.at(i, j) -= f * p.at(s, j);
      if (d.at(i, s) != 0) dirty = true;
    }
    for (int j = s + 1; j < c; ++j) {
      if (d.at(s, j) == 0) continue;
      Int f = nearest_quotient(d.at(s, j), d.at(s, s));
      if (f == 0) {
        dirty = true;
        continue;
      }
      for (int i = 0; i < r; ++i) d.at(i, j) -= f * d.at(i, s);
      for (int i = 0; i < q.rows(); ++i) q.at(i, j) -= f * q.at(i, s);
      if (d.at(s, j) != 0) dirty = true;
    }
    if (dirty) continue;

    // Divisibility fixup: pivot must divide the whole trailing block.
    bool fixed = true;
    for (int i = s + 1; i < r && fixed; ++i)
      for (int j = s + 1; j < c && fixed; ++j)
        if (d.at(i, j) % d.at(s, s) != 0) {
          for (int jj = 0; jj < c; ++jj) d.at(s, jj) += d.at(i, jj);
          for (int jj = 0; jj < p.cols(); ++jj) p.at(s, jj) += p.at(i, jj);
          fixed = false;
        }
    if (fixed) return;
  }
}

}  // namespace

SnfResult smith_normal_form(const IntMatrix& a) {
  int r = a.rows(), c = a.cols();
  SnfResult res;
  res.p = IntMatrix::identity(r);
  res.q = IntMatrix::identity(c);
  res.d = a;
  int m = std::min(r, c);
  for (int s = 0; s < m; ++s) snf_pivot_pass(res.d, res.p, res.q, s);
  for (int s = 0; s < m; ++s) {
    if (res.d.at(s, s) < 0) {
      for (int j = 0; j < c; ++j) res.d.at(s, j) = -res.d.at(s, j);
      for (int j = 0; j < res.p.cols(); ++j) res.p.at(s, j) = -res.p.at(s, j);
    }
    if (res.d.at(s, s) != 0) res.divisors.push_back(res.d.at(s, s));
  }
  return res;
}

RatMatrix invert_rational(const IntMatrix& a) {
  if (!a.is_square()) throw ShapeError("inverse of non-square matrix");
  int n = a.rows();
  RatMatrix m(a);
  RatMatrix inv(n, n);
  for (int i = 0; i < n; ++i) inv.at(i, i) = 1;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (m.at(i, k) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw SingularError("matrix is singular, no rational inverse");
    if (piv != k)
      for (int j = 0; j < n; ++j) {
        std::swap(m.at(k, j), m.at(piv, j));
        std::swap(inv.at(k, j), inv.at(piv, j));
      }
    Rat p = m.at(k, k);
    for (int j = 0; j < n; ++j) {
      m.at(k, j) /= p;
      inv.at(k, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || m.at(i, k) == 0) continue;
      Rat f = m.at(i, k);
      for (int j = 0; j < n; ++j) {
        m.at(i, j) -= f * m.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

int signature(const IntMatrix& a) {
  if (!a.is_symmetric()) throw ShapeError("signature of non-symmetric matrix");
  int n = a.rows();
  RatMatrix s(a);
  int sig = 0;
  for (int k = 0; k < n; ++k) {
    if (s.at(k, k) == 0) {
      int jd = -1, jo = -1;
      for (int j = k + 1; j < n; ++j) {
        if (jd < 0 && s.at(j, j) != 0) jd = j;
        if (jo < 0 && s.at(k, j) != 0) jo = j;
      }
      if (jd >= 0) {
        for (int t = 0; t < n; ++t) std::swap(s.at(k, t), s.at(jd, t));
        for (int t = 0; t < n; ++t) std::swap(s.at(t, k), s.at(t, jd));
      } else if (jo >= 0) {
        // e_k += e_jo makes the diagonal entry 2*s(k,jo) != 0.
        for (int t = 0; t < n; ++t) s.at(k, t) += s.at(jo, t);
        for (int t = 0; t < n; ++t) s.at(t, k) += s.at(t, jo);
      } else {
        throw SingularError("signature of singular matrix");
      }
    }
    Rat p = s.at(k, k);
    sig += (p > 0) ? 1 : -1;
    for (int i = k + 1; i < n; ++i) {
      if (s.at(i, k) == 0) continue;
      Rat f = s.at(i, k) / p;
      for (int t = 0; t < n; ++t) s.at(i, t) -= f * s.at(k, t);
      for (int t = 0; t < n; ++t) s.at(t, i) -= f * s.at(t, k);
    }
  }
  return sig;
}

IntMatrix invert_unimodular(const IntMatrix& a) {
  RatMatrix inv = invert_rational(a);
  IntMatrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const Rat& v = inv.at(i, j);
      if (v.get_den() != 1) throw ContractError("matrix is not unimodular");
      out.at(i, j) = v.get_num();
    }
  return out;
}

}  // namespace tlf
