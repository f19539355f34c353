#include <doctest.h>

#include <random>

#include "tlf/boundary.hpp"
#include "tlf/tree.hpp"

using namespace tlf;

namespace {

SymLabelledTree random_even_tree(std::mt19937_64& rng, int max_vertices, int label_bound) {
  int n = 1 + static_cast<int>(rng() % max_vertices);
  SymLabelledTree t;
  for (int v = 0; v < n; ++v)
    t.labels.emplace_back(2 * (static_cast<long>(rng() % (2 * label_bound + 1)) - label_bound));
  for (int v = 1; v < n; ++v) t.edges.emplace_back(static_cast<int>(rng() % v), v);
  return t;
}

}  // namespace

TEST_CASE("boundary of the rank-2 chain") {
  IntMatrix a = tree_to_form(SymLabelledTree::chain({Int(2), Int(-2)}));
  BoundaryResult bd = boundary({a, {}, KContext::make(3)});
  REQUIRE(bd.linking.group.divisors == std::vector<Int>{Int(5)});
  // The projected first dual vector carries q = (1/2) A^{-1}(0,0) = 1/5.
  GroupElem g = bd.project({Int(1), Int(0)});
  CHECK(bd.linking.q_of(g) == QmodZ(1, 5));
  CHECK(bd.linking.b_of(g, g) == QmodZ(2, 5));
  // Generator lift really projects onto the generator.
  GroupElem e0 = bd.project(bd.generator_lift(0));
  CHECK(e0 == GroupElem{Int(1)});
  bd.linking.validate();
}

TEST_CASE("group order equals the determinant magnitude") {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 120) {
    SymLabelledTree t = random_even_tree(rng, 8, 4);
    IntMatrix a = tree_to_form(t);
    Int d = det(a);
    if (d == 0) continue;
    ++checked;
    BoundaryResult bd = boundary({a, {}, KContext::make(3)});
    CHECK(bd.linking.group.order() == abs(d));
  }
}

TEST_CASE("unimodular forms have trivial boundary") {
  CHECK(boundary_is_trivial({tree_to_form(SymLabelledTree::chain({Int(0), Int(0)})), {},
                             KContext::make(3)}));
  CHECK(is_nonsingular({IntMatrix{{0, 1}, {1, 0}}, {}, KContext::make(3)}));
  CHECK_FALSE(is_nonsingular({IntMatrix{{2, 1}, {1, -2}}, {}, KContext::make(3)}));
}

TEST_CASE("degenerate forms are rejected") {
  CHECK_THROWS_AS(boundary({IntMatrix{{0}}, {}, KContext::make(3)}), SingularError);
}

TEST_CASE("parity law on the diagonal") {
  IntMatrix odd{{3}};
  CHECK_THROWS_AS(boundary({odd, {}, KContext::make(3)}), ContractError);
  // In the characteristic context alpha must match the diagonal parity.
  BoundaryResult bd = boundary({odd, {Int(1)}, KContext::make(2)});
  CHECK(bd.linking.group.divisors == std::vector<Int>{Int(3)});
  CHECK_THROWS_AS(boundary({odd, {Int(2)}, KContext::make(2)}), ContractError);
}

TEST_CASE("characteristic alpha shifts q and projects to beta") {
  IntMatrix a = tree_to_form(SymLabelledTree::chain({Int(2), Int(-2)}));
  std::vector<Int> alpha{Int(2), Int(0)};
  BoundaryResult bd = boundary({a, alpha, KContext::make(2)});
  bd.linking.validate();
  CHECK(bd.linking.beta == bd.project(alpha));
  CHECK(bd.linking.group.in_two_g(bd.linking.beta));
  // q picks up the cross term (1/2) A^{-1}(x, alpha).
  BoundaryResult plain = boundary({a, {}, KContext::make(2)});
  GroupElem g{Int(1)};
  QmodZ cross = bd.linking.q_of(g) - plain.linking.q_of(g);
  GroupElem gamma = bd.project({Int(1), Int(0)});
  CHECK(cross == plain.linking.b_of(g, gamma));
}

TEST_CASE("mod two coefficient context") {
  IntMatrix a = tree_to_form(SymLabelledTree::chain({Int(2), Int(-2), Int(4)}));
  std::vector<Int> alpha{Int(3), Int(1), Int(2)};
  BoundaryResult bd = boundary({a, alpha, KContext::make(5)});
  for (size_t i = 0; i < bd.linking.beta.size(); ++i) {
    CHECK(bd.linking.beta[i] >= 0);
    CHECK(bd.linking.beta[i] <= 1);
    if (bd.linking.group.divisors[i] % 2 == 1) CHECK(bd.linking.beta[i] == 0);
  }
  bd.linking.validate();
}

TEST_CASE("pairing-only boundary accepts odd diagonals") {
  BoundaryPairing bp = boundary_pairing(IntMatrix{{3}});
  REQUIRE(bp.pairing.group.divisors == std::vector<Int>{Int(3)});
  CHECK(bp.pairing.b[0][0] == QmodZ(1, 3));
  bp.pairing.validate();
}

TEST_CASE("nonsingular summands leave the boundary unchanged") {
  std::mt19937_64 rng(32);
  ExtendedQuadraticForm h{IntMatrix{{0, 1}, {1, 0}}, {}, KContext::make(3)};
  int checked = 0;
  while (checked < 25) {
    SymLabelledTree t = random_even_tree(rng, 5, 3);
    IntMatrix a = tree_to_form(t);
    Int d = det(a);
    if (d == 0 || abs(d) > 512) continue;
    ++checked;
    ExtendedQuadraticForm f{a, {}, KContext::make(3)};
    CHECK(stable_sum_invariance_check(f, h) == Outcome::Pass);
  }
  ExtendedQuadraticForm bad{IntMatrix{{2}}, {}, KContext::make(3)};
  ExtendedQuadraticForm base{IntMatrix{{4}}, {}, KContext::make(3)};
  CHECK_THROWS_AS(stable_sum_invariance_check(base, bad), ContractError);
}

TEST_CASE("boundary of a direct sum is the sum of boundaries") {
  IntMatrix a = tree_to_form(SymLabelledTree::chain({Int(2), Int(-2)}));
  IntMatrix b{{4}};
  ExtendedQuadraticForm fa{a, {}, KContext::make(3)}, fb{b, {}, KContext::make(3)};
  BoundaryResult lhs = boundary(direct_sum(fa, fb));
  QuadraticLinkingForm rhs;
  {
    BoundaryResult ba = boundary(fa), bb = boundary(fb);
    rhs = ba.linking;
    int n1 = rhs.group.rank(), n2 = bb.linking.group.rank();
    rhs.group.divisors.insert(rhs.group.divisors.end(), bb.linking.group.divisors.begin(),
                              bb.linking.group.divisors.end());
    rhs.b.resize(n1 + n2);
    for (auto& row : rhs.b) row.resize(n1 + n2);
    for (int i = 0; i < n2; ++i) {
      for (int j = 0; j < n2; ++j) rhs.b[n1 + i][n1 + j] = bb.linking.b[i][j];
      rhs.q.push_back(bb.linking.q[i]);
    }
  }
  IsoResult iso = are_isomorphic(lhs.linking, rhs);
  CHECK(iso.outcome == Outcome::Pass);
}
