#include <doctest.h>

#include <random>

#include "tlf/matrix.hpp"

using namespace tlf;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, int n, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = dist(rng);
  return m;
}

bool is_unimodular(const IntMatrix& m) {
  Int d = det(m);
  return d == 1 || d == -1;
}

}  // namespace

TEST_CASE("determinant fixtures") {
  CHECK(det(IntMatrix()) == 1);
  CHECK(det(IntMatrix{{5}}) == 5);
  CHECK(det(IntMatrix{{2, 1}, {1, -2}}) == -5);
  CHECK(det(IntMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}) == -3);
  CHECK(det(IntMatrix{{1, 2}, {2, 4}}) == 0);
}

TEST_CASE("determinant is multiplicative") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    IntMatrix a = random_matrix(rng, 4, -5, 5);
    IntMatrix b = random_matrix(rng, 4, -5, 5);
    CHECK(det(a * b) == det(a) * det(b));
  }
}

TEST_CASE("smith normal form of diag(4, 6)") {
  IntMatrix a{{4, 0}, {0, 6}};
  SnfResult s = smith_normal_form(a);
  REQUIRE(s.divisors.size() == 2);
  CHECK(s.divisors[0] == 2);
  CHECK(s.divisors[1] == 12);
  CHECK(s.p * a * s.q == s.d);
  CHECK(is_unimodular(s.p));
  CHECK(is_unimodular(s.q));
}

TEST_CASE("smith normal form properties on random matrices") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + trial % 5;
    IntMatrix a = random_matrix(rng, n, -9, 9);
    SnfResult s = smith_normal_form(a);
    CHECK(s.p * a * s.q == s.d);
    CHECK(is_unimodular(s.p));
    CHECK(is_unimodular(s.q));
    for (size_t i = 0; i < s.divisors.size(); ++i) {
      CHECK(s.divisors[i] > 0);
      if (i > 0) CHECK(s.divisors[i] % s.divisors[i - 1] == 0);
    }
    // Off-diagonal of d is zero and diagonal order is divisors then zeros.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) CHECK(s.d.at(i, j) == 0);
    Int prod(1);
    for (const auto& v : s.divisors) prod *= v;
    if (static_cast<int>(s.divisors.size()) == n) CHECK(prod == abs(det(a)));
  }
}

TEST_CASE("rational inverse") {
  std::mt19937_64 rng(13);
  int found = 0;
  while (found < 20) {
    IntMatrix a = random_matrix(rng, 4, -6, 6);
    if (det(a) == 0) continue;
    ++found;
    RatMatrix inv = invert_rational(a);
    RatMatrix prod = RatMatrix(a) * inv;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(prod.at(i, j) == Rat(i == j ? 1 : 0));
  }
  CHECK_THROWS_AS(invert_rational(IntMatrix{{1, 2}, {2, 4}}), SingularError);
}

TEST_CASE("signature fixtures and additivity") {
  CHECK(signature(IntMatrix{{2}}) == 1);
  CHECK(signature(IntMatrix{{-2}}) == -1);
  CHECK(signature(IntMatrix{{0, 1}, {1, 0}}) == 0);
  CHECK(signature(IntMatrix{{2, 0, 0}, {0, -3, 0}, {0, 0, 5}}) == 1);
  std::mt19937_64 rng(14);
  int found = 0;
  while (found < 15) {
    IntMatrix a = random_matrix(rng, 3, -4, 4);
    IntMatrix b = random_matrix(rng, 2, -4, 4);
    // Symmetrize.
    a = a + a.transpose();
    b = b + b.transpose();
    if (det(a) == 0 || det(b) == 0) continue;
    ++found;
    CHECK(signature(IntMatrix::block_diag({a, b})) == signature(a) + signature(b));
  }
  CHECK_THROWS_AS(signature(IntMatrix{{0, 1}, {2, 0}}), ShapeError);
  CHECK_THROWS_AS(signature(IntMatrix{{0}}), SingularError);
}

TEST_CASE("unimodular inverse") {
  IntMatrix u{{1, 3}, {0, -1}};
  IntMatrix inv = invert_unimodular(u);
  CHECK(u * inv == IntMatrix::identity(2));
  CHECK(inv * u == IntMatrix::identity(2));
}

TEST_CASE("matrix shape guards") {
  CHECK_THROWS_AS(det(IntMatrix(2, 3)), ShapeError);
  IntMatrix m(2, 2);
  CHECK_THROWS_AS(m.at(2, 0), ShapeError);
  CHECK_THROWS_AS(IntMatrix(2, 2) * IntMatrix(3, 3), ShapeError);
}
