#include <doctest.h>

#include <random>

#include "tlf/realize.hpp"

using namespace tlf;

namespace {

Int pw(long b, int e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

TEST_CASE("even quotient euclid") {
  EvenEuclidTrace tr = even_euclid(Int(5), Int(2));
  tr.validate();
  CHECK(tr.d.front() == 5);
  CHECK((tr.d[tr.d.size() - 2] == 1 || tr.d[tr.d.size() - 2] == -1));
  for (const auto& a : tr.a) CHECK(a % 2 == 0);
  // Negative second argument and a sign flip in the tail both work.
  even_euclid(Int(3), Int(-2)).validate();
  even_euclid(Int(27), Int(4)).validate();
  even_euclid(Int(8), Int(3)).validate();
  CHECK_THROWS_AS(even_euclid(Int(4), Int(2)), ContractError);
  CHECK_THROWS_AS(even_euclid(Int(5), Int(3)), ContractError);  // same parity
  CHECK_THROWS_AS(even_euclid(Int(2), Int(5)), ContractError);
}

TEST_CASE("parity adjustment of theta") {
  CHECK(theta_adjust(Int(3), 1, Int(1)) == -2);
  CHECK(theta_adjust(Int(3), 1, Int(2)) == 2);
  CHECK(theta_adjust(Int(5), 1, Int(3)) == 2);
  CHECK(theta_adjust(Int(5), 1, Int(1)) == 4);
  Int t = theta_adjust(Int(7), 2, Int(5));
  CHECK(t % 2 == 0);
  CHECK(gcd(t, Int(7)) == 1);
  CHECK_THROWS_AS(theta_adjust(Int(2), 1, Int(1)), ContractError);
}

TEST_CASE("cyclic chains present their target") {
  for (auto [p, j, theta] : std::vector<std::tuple<long, int, long>>{
           {2, 1, 1}, {2, 3, 3}, {2, 4, -7}, {3, 1, 1}, {3, 2, -4}, {5, 1, 2}, {7, 1, 3},
           {13, 1, 5}}) {
    Presentation pr = cyclic_tree(Int(p), j, Int(theta));
    REQUIRE(pr.witness.has_value());
    CHECK(pr.tree.is_even());
    CHECK(abs(tree_det(pr.tree)) == pw(p, j));
  }
  // Worked example: p^j = 3, theta = 1 routes through theta' = -2.
  Presentation pr = cyclic_tree(Int(3), 1, Int(1));
  IntMatrix a = tree_to_form(pr.tree);
  CHECK(invert_rational(a).at(0, 0) == Rat(-2) / Rat(3));
}

TEST_CASE("hub trees present the hyperbolic family") {
  for (int j = 1; j <= 4; ++j) {
    Presentation pr = hyperbolic_tree(j);
    REQUIRE(pr.witness.has_value());
    IntMatrix a = tree_to_form(pr.tree);
    CHECK(det(a) == pw(2, 2 * j));
    RatMatrix inv = invert_rational(a);
    CHECK(inv.at(0, 0) == 0);
    CHECK(inv.at(1, 1) == 0);
    CHECK(inv.at(0, 1) == Rat(1) / Rat(pw(2, j)));
  }
}

TEST_CASE("leafed chains present the pseudo-hyperbolic family") {
  for (int j = 1; j <= 4; ++j) {
    Presentation pr = pseudo_hyperbolic_tree(j);
    REQUIRE(pr.witness.has_value());
    CHECK(det(tree_to_form(pr.tree)) == pw(2, 2 * j));
    int eps = (j % 2 == 1) ? 1 : -1;
    // Intermediate chain determinants behind the construction.
    Int r = 2 * (1 - eps * pw(2, j - 1)) / 3;
    CHECK(tree_det(SymLabelledTree::chain({Int(0), r, Int(0), Int(0), Int(2), Int(2)})) == 3);
    CHECK(tree_det(SymLabelledTree::chain({r, Int(0), Int(0), Int(2), Int(2)})) ==
          eps * pw(2, j));
  }
}

TEST_CASE("present glues factor trees and honors beta requests") {
  std::vector<CatalogFactor> facs{{CatalogFactor::Kind::Cyclic, Int(5), 1, Int(2)},
                                  {CatalogFactor::Kind::Hyperbolic, Int(2), 1, Int(1)}};
  Presentation pr = present(facs, KContext::make(3));
  REQUIRE(pr.witness.has_value());
  CHECK(pr.alpha.empty());

  // Characteristic context with a nonzero requested defect.
  Presentation pc = present({{CatalogFactor::Kind::Cyclic, Int(5), 1, Int(1)},
                             {CatalogFactor::Kind::Cyclic, Int(3), 1, Int(1)}},
                            KContext::make(2), GroupElem{Int(2), Int(2)});
  REQUIRE(pc.witness.has_value());
  CHECK(pc.target.beta == GroupElem{Int(2), Int(2)});
  CHECK_FALSE(pc.alpha.empty());
  BoundaryResult bd = boundary({tree_to_form(pc.tree), pc.alpha, KContext::make(2)});
  CHECK(are_isomorphic(bd.linking, pc.target).outcome == Outcome::Pass);

  // Mod-two coefficients.
  Presentation pz = present({{CatalogFactor::Kind::Hyperbolic, Int(2), 2, Int(1)}},
                            KContext::make(5), GroupElem{Int(1), Int(0)});
  REQUIRE(pz.witness.has_value());
  CHECK(pz.target.beta == GroupElem{Int(1), Int(0)});

  // A defect outside 2G is rejected in the characteristic context.
  CHECK_THROWS_AS(present({{CatalogFactor::Kind::Hyperbolic, Int(2), 2, Int(1)}},
                          KContext::make(2), GroupElem{Int(1), Int(0)}),
                  ContractError);
}

TEST_CASE("decomposition recovers catalog multisets") {
  KContext ctx = KContext::make(3);
  QuadraticLinkingForm sum = direct_sum(catalog_cyclic(Int(3), 1, Int(1), ctx),
                                        catalog_hyperbolic(2, ctx));
  DecomposeResult dec = decompose_small(sum);
  REQUIRE(dec.outcome == Outcome::Pass);
  QuadraticLinkingForm rebuilt = trivial_form(ctx);
  for (const auto& f : dec.factors) rebuilt = direct_sum(rebuilt, factor_form(f, ctx));
  CHECK(are_isomorphic(rebuilt, sum).outcome == Outcome::Pass);

  DecomposeResult trivial = decompose_small(trivial_form(ctx));
  CHECK(trivial.outcome == Outcome::Pass);
  CHECK(trivial.factors.empty());

  IsoBudget tiny;
  tiny.max_group_order = 2;
  CHECK(decompose_small(sum, tiny).outcome == Outcome::Undecided);
}

TEST_CASE("cyclic splitting verdicts") {
  CHECK(cyclic_sum_decomposable(catalog_cyclic(Int(5), 1, Int(1)).pairing()) == Outcome::Pass);
  CHECK(cyclic_sum_decomposable(
            direct_sum(catalog_cyclic(Int(5), 1, Int(1)), catalog_cyclic(Int(5), 2, Int(2)))
                .pairing()) == Outcome::Pass);
  CHECK(cyclic_sum_decomposable(catalog_hyperbolic(1).pairing()) == Outcome::Fail);
  CHECK(cyclic_sum_decomposable(catalog_hyperbolic(3).pairing()) == Outcome::Fail);
  IsoBudget tiny;
  tiny.max_group_order = 2;
  CHECK(cyclic_sum_decomposable(catalog_hyperbolic(2).pairing(), tiny) == Outcome::Undecided);
}

TEST_CASE("non-treelike certificates") {
  for (int j = 1; j <= 3; ++j) {
    CertificateSearch c = non_treelike_certificate(h_plus_matrix(j));
    REQUIRE(c.outcome == Outcome::Pass);
    REQUIRE(c.certificate.has_value());
    CHECK(c.certificate->scale_factor > 1);
    // Soundness: the claimed scale factor divides every entry.
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s)
        CHECK(h_plus_matrix(j).at(r, s) % c.certificate->scale_factor == 0);
  }
  CHECK(non_treelike_certificate(IntMatrix{{2, 0}, {0, 4}}).outcome == Outcome::Fail);
  CHECK(non_treelike_certificate(IntMatrix{{2, 1}, {1, -2}}).outcome == Outcome::Fail);
  CHECK_THROWS_AS(non_treelike_certificate(IntMatrix{{1, 2}, {2, 4}}), ContractError);
}

TEST_CASE("rank eight fixtures") {
  IntMatrix e8 = e8_matrix();
  CHECK(det(e8) == 1);
  CHECK(signature(e8) == 8);
  CHECK(e8.has_even_diagonal());
  IntMatrix e8h = e8_hat_matrix();
  CHECK(det(e8h) == 1);
  CHECK(signature(e8h) == -8);
  auto t1 = tree_from_form(e8);
  auto t2 = tree_from_form(e8h);
  REQUIRE(t1.has_value());
  REQUIRE(t2.has_value());
  CHECK(tree_to_form(*t1) == e8);
  CHECK(tree_to_form(*t2) == e8h);
}

TEST_CASE("rank four fixture audit reports the discrepancy") {
  // The stated closed form does not have determinant +-2^(2j); the audit
  // must say so rather than repair the matrix.
  std::vector<long> dets{-992, 6016, -55808, 415744};
  for (int j = 1; j <= 4; ++j) {
    FPlusAudit a = audit_f_plus(j);
    CHECK(a.determinant == dets[j - 1]);
    CHECK(a.expected_abs == pw(2, 2 * j));
    CHECK_FALSE(a.det_matches);
    CHECK(a.note.find("disagrees") != std::string::npos);
  }
}

TEST_CASE("stabilization on small even forms") {
  // Already treelike: identity fast path.
  StabilizeResult direct = stabilize_treelike({e8_matrix(), {}, KContext::make(3)});
  CHECK(direct.outcome == Outcome::Pass);
  CHECK(direct.certificate.signature == 8);

  // Not treelike as given: H+(2) picks up one hyperbolic pad.
  StabilizeResult h = stabilize_treelike({h_plus_matrix(1), {}, KContext::make(3)});
  CHECK(h.outcome == Outcome::Pass);
  CHECK(h.certificate.s == 1);
  CHECK(h.certificate.signature == 0);
  CHECK(h.certificate.boundary_iso.outcome == Outcome::Pass);
  REQUIRE(h.certificate.isometry.has_value());
  // The found isometry really conjugates input-plus-pad to the candidate.
  IntMatrix padded = IntMatrix::block_diag({h_plus_matrix(1), IntMatrix{{0, 1}, {1, 0}}});
  IntMatrix u = *h.certificate.isometry;
  CHECK(u.transpose() * padded * u == tree_to_form(h.tree));

  // Random property: rank, signature, boundary all certified.
  std::mt19937_64 rng(41);
  int checked = 0;
  while (checked < 12) {
    int n = 2 + static_cast<int>(rng() % 3);
    IntMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        long v = static_cast<long>(rng() % 5) - 2;
        if (i == j) v *= 2;
        a.at(i, j) = v;
        a.at(j, i) = v;
      }
    Int d = det(a);
    if (d == 0 || abs(d) > 512) continue;
    ++checked;
    StabilizeResult r = stabilize_treelike({a, {}, KContext::make(3)});
    CHECK(r.outcome == Outcome::Pass);
    IntMatrix cand = tree_to_form(r.tree);
    CHECK(signature(cand) == signature(a));
    CHECK(cand.rows() == n + 2 * r.certificate.s);
    CHECK((r.certificate.signature - r.certificate.milgram) % 8 == 0);
  }

  CHECK_THROWS_AS(stabilize_treelike({IntMatrix{{3}}, {}, KContext::make(3)}), ContractError);
}

TEST_CASE("stabilization splits the radical") {
  IntMatrix a(3, 3);
  a.at(0, 1) = 2;
  a.at(1, 0) = 2;  // H+(2) plus a zero row/column
  StabilizeResult r = stabilize_treelike({a, {}, KContext::make(3)});
  CHECK(r.outcome == Outcome::Pass);
  CHECK(r.certificate.zero_rank == 1);
  CHECK(r.tree.size() == r.certificate.rank + 1);
}
