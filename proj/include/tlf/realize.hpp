#pragma once

#include "tlf/boundary.hpp"
#include "tlf/tree.hpp"

namespace tlf {

// Trace of the even-quotient Euclidean algorithm
//   d_i = a_i * d_{i+1} - d_{i+2}
// with every a_i even, ending d_{n+1} = +-1, d_{n+2} = 0. d_prime is the
// sign-normalized sequence d_{n+1} * d_i.
struct EvenEuclidTrace {
  std::vector<Int> d;
  std::vector<Int> a;
  std::vector<Int> d_prime;

  void validate() const;
};

// Requires gcd(d1, d2) = 1, |d1| > |d2| >= 1, opposite parity. The even
// quotient nearest to d_i / d_{i+1} is unique because of the parity split.
EvenEuclidTrace even_euclid(const Int& d1, const Int& d2);

// For odd p: an even theta' of minimal |theta'| (positive preferred on
// ties) in the same unit-square class as theta mod p^j.
Int theta_adjust(const Int& p, int j, const Int& theta);

// A labelled tree presenting a linking form on its boundary, with the
// verified isomorphism from the boundary onto the target.
struct Presentation {
  QuadraticLinkingForm target;
  SymLabelledTree tree;
  std::vector<Int> alpha;
  std::optional<Isomorphism> witness;  // boundary generators -> target
};

struct CatalogFactor {
  enum class Kind { Cyclic, Hyperbolic, Pseudo };
  Kind kind = Kind::Cyclic;
  Int p = 2;  // cyclic only
  int j = 1;
  Int theta = 1;  // cyclic only
};

QuadraticLinkingForm factor_form(const CatalogFactor& f, KContext ctx);

Presentation cyclic_tree(const Int& p, int j, const Int& theta, KContext ctx = {});
Presentation hyperbolic_tree(int j, KContext ctx = {});
Presentation pseudo_hyperbolic_tree(int j, KContext ctx = {});

struct PresentOptions {
  IsoBudget iso;
  int alpha_window = 8;
};

// Realizes an orthogonal sum of catalog factors, with a requested
// homogeneity defect, as the boundary of an even labelled tree.
Presentation present(const std::vector<CatalogFactor>& factors, KContext ctx,
                     const GroupElem& beta_request = {}, const PresentOptions& opts = {});

struct DecomposeResult {
  Outcome outcome = Outcome::Undecided;
  std::vector<CatalogFactor> factors;
  std::optional<Isomorphism> witness;  // sum-of-factor generators -> f
  std::string note;
};

// Matches a homogeneous form against multisets of catalog factors with
// the same group invariants; Fail means no multiset matched.
DecomposeResult decompose_small(const QuadraticLinkingForm& f, const IsoBudget& budget = {});

// Whether the pairing splits as an orthogonal sum of cyclic pairings.
// Decided p-primary part by p-primary part by exhaustive basis search;
// Pass and Fail are both certified.
Outcome cyclic_sum_decomposable(const LinkingPairing& p, const IsoBudget& budget = {});

struct NonTreelikeCertificate {
  IntMatrix form;
  Int scale_factor;  // k > 1 dividing every entry
  std::string boundary_fact;
};

struct CertificateSearch {
  Outcome outcome = Outcome::Undecided;  // Pass: certificate; Fail: none applies
  std::optional<NonTreelikeCertificate> certificate;
  std::string note;
};

// One-directional non-treelikeness test: the form must be divisible by
// some k > 1 and its boundary pairing must fail to split into cyclics.
CertificateSearch non_treelike_certificate(const IntMatrix& f, const IsoBudget& budget = {});

struct StabilizeOptions {
  IsoBudget iso;
  bool isometry_search = true;
  int isometry_rank_limit = 6;
  long isometry_entry_bound = 2;
  long isometry_nodes = 2'000'000;
};

struct StabilizeCertificate {
  int rank = 0;       // rank of input-plus-pads and of the candidate core
  int signature = 0;  // shared signature of the nondegenerate parts
  long s = 0;         // hyperbolic pads added on the input side
  long t = 0;         // E8 copies in the candidate; negative means the -8 twin
  long zero_rank = 0; // radical rank split off both sides
  int milgram = 0;    // Gauss sum phase of the shared boundary
  IsoResult boundary_iso;
  std::optional<IntMatrix> isometry;  // found only by the bounded search
};

struct StabilizeResult {
  Outcome outcome = Outcome::Undecided;
  SymLabelledTree tree;  // candidate forest
  std::vector<Int> alpha;
  StabilizeCertificate certificate;
};

// Produces a treelike candidate stably equivalent to the input even form:
// same signature, matching rank after hyperbolic padding, isomorphic
// boundary. The equivalence certificate is assembled from those checks;
// an explicit isometry is only attached when the optional bounded search
// finds one. The computation uses the symmetric form with alpha = 0.
StabilizeResult stabilize_treelike(const ExtendedQuadraticForm& f,
                                   const StabilizeOptions& opts = {});

// Fixture matrices.
IntMatrix e8_matrix();
IntMatrix e8_hat_matrix();
IntMatrix h_plus_matrix(int j);  // [[0, 2^j], [2^j, 0]]
IntMatrix f_plus_matrix(int j);  // rank-4 companion of the pseudo-hyperbolic family

struct FPlusAudit {
  int j = 1;
  Int determinant;
  Int expected_abs;  // 2^(2j)
  bool det_matches = false;
  Outcome boundary_matches = Outcome::Undecided;
  std::string note;
};

// Checks the rank-4 fixture against its stated determinant and boundary;
// discrepancies are reported, never patched.
FPlusAudit audit_f_plus(int j, const IsoBudget& budget = {});

}  // namespace tlf
