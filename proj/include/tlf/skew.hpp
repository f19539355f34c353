#pragma once

#include "tlf/tree.hpp"

namespace tlf {

// Constructive splitting of a skew treelike form into hyperbolic pairs
// plus a zero summand: u^T * A * u = blockdiag([[0,1],[-1,0]]^s, 0^t)
// exactly, with u unimodular and 2s + t = number of vertices.
struct SkewDecomposition {
  long s = 0;  // hyperbolic summands
  long t = 0;  // rank of the zero summand
  IntMatrix u;

  void validate(const IntMatrix& a) const;
};

// Peels the highest-index leaf together with its neighbour, detaching
// the neighbour's remaining subtrees by column moves along the leaf;
// isolated vertices left at the end form the zero summand.
SkewDecomposition decompose_skew_tree(const SkewLabelledTree& t);

}  // namespace tlf
