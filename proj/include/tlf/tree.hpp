#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlf/matrix.hpp"

namespace tlf {

// Vertex-labelled forest defining a symmetric bilinear form: diagonal
// entries are the labels, off-diagonal entries are 1 exactly on edges.
// Edges are stored with from < to and sorted; validation enforces
// acyclicity. Connectivity is not required.
struct SymLabelledTree {
  std::vector<Int> labels;
  std::vector<std::pair<int, int>> edges;

  int size() const { return static_cast<int>(labels.size()); }
  void validate() const;  // throws ContractError on loops, cycles, bad indices
  bool is_connected() const;
  bool is_even() const;  // all labels even
  int component_count() const;

  static SymLabelledTree chain(const std::vector<Int>& labels);
  std::string to_dot() const;
};

// Directed forest with a sign on each edge, defining a skew-symmetric
// form: an edge i->j with sign e contributes e at (i, j) and -e at
// (j, i). At most one edge joins any vertex pair, in one direction only.
struct SkewLabelledTree {
  struct Edge {
    int from, to;
    int sign;  // +1 or -1
  };
  int num_vertices = 0;
  std::vector<Edge> edges;

  void validate() const;
  std::string to_dot() const;
};

// Plumbing description: vertices carry an Euler label plus a stable
// bundle class that the bilinear form does not see.
struct PlumbingGraph {
  struct Vertex {
    Int euler;
    Int stable_class = 0;
  };
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;

  SymLabelledTree tree() const;
};

IntMatrix tree_to_form(const SymLabelledTree& t);
IntMatrix skew_tree_to_form(const SkewLabelledTree& t);

// Determinant of tree_to_form(t) by leaf recursion
//   det(T) = a_v det(T - v) - det(T - v - w)
// peeling the highest-index leaf v with neighbour w, with memoisation
// across shared subforests. Matches det(tree_to_form(t)) exactly.
Int tree_det(const SymLabelledTree& t);

// Reads a forest back off a symmetric matrix whose off-diagonal entries
// are all 0 or 1. Returns nullopt when an entry is out of range or the
// edge set has a cycle.
std::optional<SymLabelledTree> tree_from_form(const IntMatrix& a);

// Gluing move joining labelled forests through a fresh hyperbolic pair:
// a 0 - 0 chain is appended and its first vertex is joined to the chosen
// anchor vertex of every summand. The witness u is unimodular with
//   u^T * tree_to_form(result) * u == block_diag(forms..., [[0,1],[1,0]]).
struct GlueResult {
  SymLabelledTree tree;
  std::vector<int> anchor_map;  // vertex of the glued tree for each summand anchor
  int hub;                      // index of the first fresh vertex
  IntMatrix witness;
};

GlueResult glue_summands(const std::vector<SymLabelledTree>& summands,
                         const std::vector<int>& anchors);

// Connected sum of plumbing graphs along chosen vertices, realised by the
// same hub pattern; tags are carried through unchanged.
struct ConnectSumResult {
  PlumbingGraph graph;
  int hub;
  IntMatrix witness;  // same convention as GlueResult
};

ConnectSumResult connect_sum_graphs(const PlumbingGraph& g1, int v1,
                                    const PlumbingGraph& g2, int v2);

}  // namespace tlf
