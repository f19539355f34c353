#include "tlf/skew.hpp"

#include <algorithm>

namespace tlf {

void SkewDecomposition::validate(const IntMatrix& a) const {
  int n = a.rows();
  if (2 * s + t != n) throw ContractError("2s + t must equal the rank of the ambient lattice");
  Int d = det(u);
  if (d != 1 && d != -1) throw ContractError("basis change must be unimodular");
  IntMatrix got = u.transpose() * a * u;
  IntMatrix want(n, n);
  for (long i = 0; i < s; ++i) {
    want.at(2 * i, 2 * i + 1) = 1;
    want.at(2 * i + 1, 2 * i) = -1;
  }
  if (!(got == want)) throw ContractError("basis change does not reach the normal form");
}

SkewDecomposition decompose_skew_tree(const SkewLabelledTree& t) {
  t.validate();
  int n = t.num_vertices;
  IntMatrix a = skew_tree_to_form(t);
  IntMatrix m = a;
  IntMatrix u = IntMatrix::identity(n);
  std::vector<bool> active(n, true);

  auto add_col = [&](int dst, int src, const Int& c) {
    for (int r = 0; r < n; ++r) u.at(r, dst) += c * u.at(r, src);
    for (int r = 0; r < n; ++r) m.at(r, dst) += c * m.at(r, src);
    for (int r = 0; r < n; ++r) m.at(dst, r) += c * m.at(src, r);
  };
  auto degree = [&](int v) {
    int d = 0;
    for (int w = 0; w < n; ++w)
      if (w != v && active[w] && m.at(v, w) != 0) ++d;
    return d;
  };

  std::vector<std::pair<int, int>> pairs;
  for (;;) {
    int leaf = -1;
    for (int v = n - 1; v >= 0; --v)
      if (active[v] && degree(v) == 1) {
        leaf = v;
        break;
      }
    if (leaf < 0) break;
    int nb = -1;
    for (int w = 0; w < n; ++w)
      if (w != leaf && active[w] && m.at(leaf, w) != 0) nb = w;
    // Detach the neighbour's other subtrees along the leaf column; the
    // moving coefficient is an integer because both entries are units.
    for (int w = 0; w < n; ++w) {
      if (w == leaf || w == nb || !active[w]) continue;
      if (m.at(w, nb) == 0) continue;
      add_col(w, leaf, -m.at(w, nb) / m.at(leaf, nb));
    }
    // Orient the pair so its pairing value is +1; no sign flip needed.
    if (m.at(leaf, nb) > 0)
      pairs.emplace_back(leaf, nb);
    else
      pairs.emplace_back(nb, leaf);
    active[leaf] = active[nb] = false;
  }

  // A forest with no active leaf has only isolated active vertices left.
  std::vector<int> order;
  for (const auto& [a1, b1] : pairs) {
    order.push_back(a1);
    order.push_back(b1);
  }
  for (int v = 0; v < n; ++v)
    if (active[v]) order.push_back(v);

  SkewDecomposition res;
  res.s = static_cast<long>(pairs.size());
  res.t = n - 2 * res.s;
  res.u = IntMatrix(n, n);
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < n; ++r) res.u.at(r, j) = u.at(r, order[j]);
  res.validate(a);
  return res;
}

}  // namespace tlf
