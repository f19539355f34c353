#include <doctest.h>

#include <random>

#include "tlf/skew.hpp"

using namespace tlf;

TEST_CASE("degenerate skew inputs") {
  SkewLabelledTree empty;
  SkewDecomposition d0 = decompose_skew_tree(empty);
  CHECK(d0.s == 0);
  CHECK(d0.t == 0);

  SkewLabelledTree single;
  single.num_vertices = 1;
  SkewDecomposition d1 = decompose_skew_tree(single);
  CHECK(d1.s == 0);
  CHECK(d1.t == 1);

  SkewLabelledTree edge;
  edge.num_vertices = 2;
  edge.edges = {{0, 1, 1}};
  SkewDecomposition d2 = decompose_skew_tree(edge);
  CHECK(d2.s == 1);
  CHECK(d2.t == 0);
  CHECK(d2.u == IntMatrix::identity(2));
}

TEST_CASE("star peels one pair and decouples the rest") {
  SkewLabelledTree star;
  star.num_vertices = 4;
  star.edges = {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}};
  SkewDecomposition d = decompose_skew_tree(star);
  CHECK(d.s == 1);
  CHECK(d.t == 2);
  d.validate(skew_tree_to_form(star));
}

TEST_CASE("negative edges are normalized through the basis") {
  SkewLabelledTree t;
  t.num_vertices = 3;
  t.edges = {{1, 0, -1}, {1, 2, -1}};
  SkewDecomposition d = decompose_skew_tree(t);
  CHECK(d.s == 1);
  CHECK(d.t == 1);
  d.validate(skew_tree_to_form(t));
}

TEST_CASE("random skew forests reach the normal form exactly") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 500; ++trial) {
    int n = 1 + static_cast<int>(rng() % 20);
    SkewLabelledTree f;
    f.num_vertices = n;
    for (int v = 1; v < n; ++v) {
      if (rng() % 3 == 0) continue;  // leave gaps so forests split
      int p = static_cast<int>(rng() % v);
      int sign = (rng() % 2) ? 1 : -1;
      if (rng() % 2)
        f.edges.push_back({p, v, sign});
      else
        f.edges.push_back({v, p, sign});
    }
    IntMatrix a = skew_tree_to_form(f);
    SkewDecomposition d = decompose_skew_tree(f);
    d.validate(a);  // normal form, unimodularity, 2s + t = n
    // Nonsingular exactly when no zero summand remains.
    CHECK((det(a) != 0) == (d.t == 0));
  }
}

TEST_CASE("skew tree validation") {
  SkewLabelledTree bad;
  bad.num_vertices = 2;
  bad.edges = {{0, 1, 2}};
  CHECK_THROWS_AS(decompose_skew_tree(bad), ContractError);
  SkewLabelledTree both;
  both.num_vertices = 2;
  both.edges = {{0, 1, 1}, {1, 0, 1}};
  CHECK_THROWS_AS(decompose_skew_tree(both), ContractError);
}
