#include <doctest.h>

#include <random>

#include "tlf/tree.hpp"

using namespace tlf;

namespace {

SymLabelledTree random_forest(std::mt19937_64& rng, int max_vertices, int label_bound,
                              int skip_mod = 0) {
  std::uniform_int_distribution<int> nd(1, max_vertices);
  int n = nd(rng);
  std::uniform_int_distribution<int> ld(-label_bound, label_bound);
  SymLabelledTree t;
  for (int v = 0; v < n; ++v) t.labels.emplace_back(ld(rng));
  for (int v = 1; v < n; ++v) {
    if (skip_mod > 0 && static_cast<int>(rng() % skip_mod) == 0) continue;
    t.edges.emplace_back(static_cast<int>(rng() % v), v);
  }
  return t;
}

}  // namespace

TEST_CASE("tree to form") {
  SymLabelledTree t = SymLabelledTree::chain({Int(2), Int(-2)});
  CHECK(tree_to_form(t) == IntMatrix{{2, 1}, {1, -2}});
  SymLabelledTree star;
  star.labels = {Int(1), Int(2), Int(3)};
  star.edges = {{0, 1}, {0, 2}};
  CHECK(tree_to_form(star) == IntMatrix{{1, 1, 1}, {1, 2, 0}, {1, 0, 3}});
}

TEST_CASE("skew tree to form") {
  SkewLabelledTree star;
  star.num_vertices = 3;
  star.edges = {{0, 1, 1}, {0, 2, 1}};
  CHECK(skew_tree_to_form(star) == IntMatrix{{0, 1, 1}, {-1, 0, 0}, {-1, 0, 0}});
  SkewLabelledTree neg;
  neg.num_vertices = 2;
  neg.edges = {{1, 0, -1}};
  CHECK(skew_tree_to_form(neg) == IntMatrix{{0, 1}, {-1, 0}});
}

TEST_CASE("tree validation rejects bad shapes") {
  SymLabelledTree loop;
  loop.labels = {Int(0)};
  loop.edges = {{0, 0}};
  CHECK_THROWS_AS(loop.validate(), ContractError);
  SymLabelledTree cycle;
  cycle.labels = {Int(0), Int(0), Int(0)};
  cycle.edges = {{0, 1}, {1, 2}, {0, 2}};
  CHECK_THROWS_AS(cycle.validate(), ContractError);
  SymLabelledTree dup;
  dup.labels = {Int(0), Int(0)};
  dup.edges = {{0, 1}, {0, 1}};
  CHECK_THROWS_AS(dup.validate(), ContractError);
  SymLabelledTree range;
  range.labels = {Int(0)};
  range.edges = {{0, 1}};
  CHECK_THROWS_AS(range.validate(), ContractError);
}

TEST_CASE("leaf recursion matches elimination on random forests") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    SymLabelledTree t = random_forest(rng, 12, 8, 5);
    CHECK(tree_det(t) == det(tree_to_form(t)));
  }
}

TEST_CASE("chain determinants") {
  // Continuant identity: det grows by label times previous minus the one before.
  std::vector<Int> labels{Int(2), Int(-3), Int(4), Int(-5)};
  SymLabelledTree c = SymLabelledTree::chain(labels);
  CHECK(tree_det(c) == det(tree_to_form(c)));
  CHECK(tree_det(SymLabelledTree::chain({Int(0), Int(0)})) == -1);
}

TEST_CASE("form to tree round trip") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    SymLabelledTree t = random_forest(rng, 10, 6, 4);
    auto back = tree_from_form(tree_to_form(t));
    REQUIRE(back.has_value());
    CHECK(back->labels == t.labels);
    std::vector<std::pair<int, int>> e1 = t.edges, e2 = back->edges;
    std::sort(e1.begin(), e1.end());
    std::sort(e2.begin(), e2.end());
    CHECK(e1 == e2);
  }
  CHECK_FALSE(tree_from_form(IntMatrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}).has_value());
  CHECK_FALSE(tree_from_form(IntMatrix{{0, 2}, {2, 0}}).has_value());
}

TEST_CASE("gluing is congruent to sum plus hyperbolic") {
  std::mt19937_64 rng(23);
  IntMatrix h{{0, 1}, {1, 0}};
  for (int trial = 0; trial < 40; ++trial) {
    SymLabelledTree t1 = random_forest(rng, 6, 4);
    SymLabelledTree t2 = random_forest(rng, 6, 4);
    int a1 = static_cast<int>(rng() % t1.size());
    int a2 = static_cast<int>(rng() % t2.size());
    GlueResult g = glue_summands({t1, t2}, {a1, a2});
    g.tree.validate();
    IntMatrix expect = IntMatrix::block_diag({tree_to_form(t1), tree_to_form(t2), h});
    CHECK(g.witness.transpose() * tree_to_form(g.tree) * g.witness == expect);
    Int dw = det(g.witness);
    CHECK((dw == 1 || dw == -1));
    CHECK(g.tree.labels[g.hub] == 0);
  }
}

TEST_CASE("connected sum of plumbing graphs") {
  PlumbingGraph g1;
  g1.vertices = {{Int(2), Int(1)}, {Int(-2), Int(0)}};
  g1.edges = {{0, 1}};
  PlumbingGraph g2;
  g2.vertices = {{Int(4), Int(0)}};
  ConnectSumResult r = connect_sum_graphs(g1, 0, g2, 0);
  CHECK(r.graph.vertices.size() == 5);
  CHECK(r.graph.vertices[0].stable_class == 1);  // tags carried through
  IntMatrix expect = IntMatrix::block_diag(
      {tree_to_form(g1.tree()), tree_to_form(g2.tree()), IntMatrix{{0, 1}, {1, 0}}});
  CHECK(r.witness.transpose() * tree_to_form(r.graph.tree()) * r.witness == expect);
}

TEST_CASE("dot rendering") {
  SymLabelledTree t = SymLabelledTree::chain({Int(2), Int(-2)});
  std::string dot = t.to_dot();
  CHECK(dot.find("v0: 2") != std::string::npos);
  CHECK(dot.find("v1: -2") != std::string::npos);
  CHECK(dot.find("v0 -- v1") != std::string::npos);
  SkewLabelledTree s;
  s.num_vertices = 2;
  s.edges = {{0, 1, -1}};
  std::string sdot = s.to_dot();
  CHECK(sdot.find("digraph") != std::string::npos);
  CHECK(sdot.find("v0 -> v1") != std::string::npos);
}

TEST_CASE("connectivity helpers") {
  SymLabelledTree t;
  t.labels = {Int(0), Int(0), Int(0)};
  t.edges = {{0, 1}};
  CHECK_FALSE(t.is_connected());
  CHECK(t.component_count() == 2);
  t.edges.emplace_back(1, 2);
  CHECK(t.is_connected());
  CHECK(t.is_even());
  t.labels[0] = 3;
  CHECK_FALSE(t.is_even());
}
