#pragma once

#include "tlf/linking.hpp"
#include "tlf/matrix.hpp"

namespace tlf {

// Integer symmetric form together with the stable tangential vector alpha
// over the coefficient group of the context. alpha is empty when the
// coefficient group is trivial; an empty alpha otherwise means zero.
struct ExtendedQuadraticForm {
  IntMatrix form;
  std::vector<Int> alpha;
  KContext context;

  // Checks symmetry plus the parity laws: diagonal congruent to alpha
  // mod 2 in the characteristic contexts, even diagonal otherwise.
  void validate() const;
  std::vector<Int> alpha_or_zero() const;
};

ExtendedQuadraticForm direct_sum(const ExtendedQuadraticForm& f1, const ExtendedQuadraticForm& f2);

// Boundary data: the linking form on G = coker of the adjoint, plus the
// presentation witness needed to replay the computation. With PAQ = D,
// G keeps the divisors of D exceeding 1 and the projection of a dual
// vector x is (Px) reduced mod those divisors.
struct BoundaryResult {
  QuadraticLinkingForm linking;
  SnfResult snf;
  std::vector<int> kept;  // rows of D whose divisor exceeds 1
  RatMatrix inverse;      // exact inverse of the form matrix

  GroupElem project(const std::vector<Int>& x) const;
  // An integer vector mapping to the i-th generator under project().
  std::vector<Int> generator_lift(int i) const;

 private:
  friend BoundaryResult boundary(const ExtendedQuadraticForm&);
  IntMatrix p_inverse_;
};

BoundaryResult boundary(const ExtendedQuadraticForm& f);

// The pairing half of the boundary for a symmetric nondegenerate matrix
// with no evenness requirement.
struct BoundaryPairing {
  LinkingPairing pairing;
  SnfResult snf;
  std::vector<int> kept;
};

BoundaryPairing boundary_pairing(const IntMatrix& a);

bool is_nonsingular(const ExtendedQuadraticForm& f);
bool boundary_is_trivial(const ExtendedQuadraticForm& f);

// Verifies that summing a nonsingular form onto f_nd leaves the boundary
// unchanged up to isomorphism.
Outcome stable_sum_invariance_check(const ExtendedQuadraticForm& f_nd,
                                    const ExtendedQuadraticForm& f_ns,
                                    const IsoBudget& budget = {});

}  // namespace tlf
