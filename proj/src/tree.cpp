#include "tlf/tree.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace tlf {

namespace {

// Union-find used for acyclicity checks.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // Returns false if x and y were already connected.
  bool unite(int x, int y) {
    int a = find(x), b = find(y);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

void SymLabelledTree::validate() const {
  int n = size();
  Dsu dsu(n);
  std::map<std::pair<int, int>, bool> seen;
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw ContractError("edge endpoint out of range");
    if (a == b) throw ContractError("self-loop in tree");
    std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    if (seen[key]) throw ContractError("duplicate edge in tree");
    seen[key] = true;
    if (!dsu.unite(a, b)) throw ContractError("cycle in tree");
  }
}

bool SymLabelledTree::is_connected() const {
  return component_count() <= 1;
}

int SymLabelledTree::component_count() const {
  int n = size();
  Dsu dsu(n);
  int comps = n;
  for (const auto& [a, b] : edges)
    if (dsu.unite(a, b)) --comps;
  return comps;
}

bool SymLabelledTree::is_even() const {
  for (const auto& a : labels)
    if (a % 2 != 0) return false;
  return true;
}

SymLabelledTree SymLabelledTree::chain(const std::vector<Int>& labels) {
  SymLabelledTree t;
  t.labels = labels;
  for (int i = 0; i + 1 < static_cast<int>(labels.size()); ++i) t.edges.emplace_back(i, i + 1);
  return t;
}

std::string SymLabelledTree::to_dot() const {
  std::ostringstream os;
  os << "graph tree {\n";
  for (int i = 0; i < size(); ++i)
    os << "  v" << i << " [label=\"v" << i << ": " << labels[i].get_str() << "\"];\n";
  for (const auto& [a, b] : edges) os << "  v" << a << " -- v" << b << ";\n";
  os << "}\n";
  return os.str();
}

void SkewLabelledTree::validate() const {
  int n = num_vertices;
  if (n < 0) throw ContractError("negative vertex count");
  Dsu dsu(n);
  std::map<std::pair<int, int>, bool> seen;
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw ContractError("edge endpoint out of range");
    if (e.from == e.to) throw ContractError("self-loop in skew tree");
    if (e.sign != 1 && e.sign != -1) throw ContractError("edge sign must be +1 or -1");
    std::pair<int, int> key{std::min(e.from, e.to), std::max(e.from, e.to)};
    if (seen[key]) throw ContractError("vertex pair joined twice in skew tree");
    seen[key] = true;
    if (!dsu.unite(e.from, e.to)) throw ContractError("cycle in skew tree");
  }
}

std::string SkewLabelledTree::to_dot() const {
  std::ostringstream os;
  os << "digraph tree {\n";
  for (int i = 0; i < num_vertices; ++i) os << "  v" << i << " [label=\"v" << i << ": 0\"];\n";
  for (const auto& e : edges)
    os << "  v" << e.from << " -> v" << e.to << " [sign=" << e.sign << "];\n";
  os << "}\n";
  return os.str();
}

SymLabelledTree PlumbingGraph::tree() const {
  SymLabelledTree t;
  t.labels.reserve(vertices.size());
  for (const auto& v : vertices) t.labels.push_back(v.euler);
  t.edges = edges;
  return t;
}

IntMatrix tree_to_form(const SymLabelledTree& t) {
  t.validate();
  int n = t.size();
  IntMatrix a(n, n);
  for (int i = 0; i < n; ++i) a.at(i, i) = t.labels[i];
  for (const auto& [u, v] : t.edges) {
    a.at(u, v) = 1;
    a.at(v, u) = 1;
  }
  return a;
}

IntMatrix skew_tree_to_form(const SkewLabelledTree& t) {
  t.validate();
  int n = t.num_vertices;
  IntMatrix a(n, n);
  for (const auto& e : t.edges) {
    a.at(e.from, e.to) = e.sign;
    a.at(e.to, e.from) = -e.sign;
  }
  return a;
}

namespace {

using Mask = std::vector<unsigned long long>;

struct TreeDetCtx {
  const SymLabelledTree& t;
  std::vector<std::vector<int>> adj;
  std::map<Mask, Int> memo;

  bool alive(const Mask& m, int v) const { return (m[v / 64] >> (v % 64)) & 1; }
  void clear(Mask& m, int v) const { m[v / 64] &= ~(1ull << (v % 64)); }

  Int eval(const Mask& m) {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    int n = t.size();
    // Split off the component of the highest live vertex.
    int top = -1;
    for (int v = n - 1; v >= 0; --v)
      if (alive(m, v)) {
        top = v;
        break;
      }
    if (top < 0) return 1;
    Mask comp(m.size(), 0), rest = m;
    std::vector<int> stack = {top};
    comp[top / 64] |= 1ull << (top % 64);
    clear(rest, top);
    std::vector<int> verts = {top};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (alive(rest, w)) {
          clear(rest, w);
          comp[w / 64] |= 1ull << (w % 64);
          stack.push_back(w);
          verts.push_back(w);
        }
    }
    Int result;
    if (verts.size() == 1) {
      result = t.labels[top];
    } else {
      // Highest-index leaf of the component and its unique live neighbour.
      int leaf = -1, nbr = -1;
      for (int v = n - 1; v >= 0; --v) {
        if (!alive(comp, v)) continue;
        int deg = 0, last = -1;
        for (int w : adj[v])
          if (alive(comp, w)) {
            ++deg;
            last = w;
          }
        if (deg == 1) {
          leaf = v;
          nbr = last;
          break;
        }
      }
      Mask m1 = comp;
      clear(m1, leaf);
      Mask m2 = m1;
      clear(m2, nbr);
      result = t.labels[leaf] * eval(m1) - eval(m2);
    }
    bool rest_empty = true;
    for (auto w : rest)
      if (w) {
        rest_empty = false;
        break;
      }
    if (!rest_empty) result *= eval(rest);
    memo.emplace(m, result);
    return result;
  }
};

}  // namespace

Int tree_det(const SymLabelledTree& t) {
  t.validate();
  int n = t.size();
  if (n == 0) return 1;
  TreeDetCtx ctx{t, std::vector<std::vector<int>>(n), {}};
  for (const auto& [a, b] : t.edges) {
    ctx.adj[a].push_back(b);
    ctx.adj[b].push_back(a);
  }
  Mask full((n + 63) / 64, 0);
  for (int v = 0; v < n; ++v) full[v / 64] |= 1ull << (v % 64);
  return ctx.eval(full);
}

std::optional<SymLabelledTree> tree_from_form(const IntMatrix& a) {
  if (!a.is_symmetric()) return std::nullopt;
  int n = a.rows();
  SymLabelledTree t;
  t.labels.resize(n);
  Dsu dsu(n);
  for (int i = 0; i < n; ++i) t.labels[i] = a.at(i, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (a.at(i, j) == 0) continue;
      if (a.at(i, j) != 1) return std::nullopt;
      if (!dsu.unite(i, j)) return std::nullopt;  // cycle
      t.edges.emplace_back(i, j);
    }
  return t;
}

GlueResult glue_summands(const std::vector<SymLabelledTree>& summands,
                         const std::vector<int>& anchors) {
  if (summands.size() != anchors.size())
    throw ContractError("one anchor required per summand");
  GlueResult res;
  int offset = 0;
  for (size_t s = 0; s < summands.size(); ++s) {
    const auto& t = summands[s];
    t.validate();
    if (anchors[s] < 0 || anchors[s] >= t.size())
      throw ContractError("anchor index out of range");
    res.anchor_map.push_back(offset + anchors[s]);
    for (const auto& a : t.labels) res.tree.labels.push_back(a);
    for (const auto& [u, v] : t.edges) res.tree.edges.emplace_back(offset + u, offset + v);
    offset += t.size();
  }
  int z1 = offset, z2 = offset + 1;
  res.hub = z1;
  res.tree.labels.push_back(0);
  res.tree.labels.push_back(0);
  res.tree.edges.emplace_back(z1, z2);
  for (int a : res.anchor_map) res.tree.edges.emplace_back(a, z1);
  res.tree.validate();
  // New basis: each anchor picks up -z2; this kills its pairing with z1.
  res.witness = IntMatrix::identity(offset + 2);
  for (int a : res.anchor_map) res.witness.at(z2, a) = -1;
  return res;
}

ConnectSumResult connect_sum_graphs(const PlumbingGraph& g1, int v1,
                                    const PlumbingGraph& g2, int v2) {
  std::vector<SymLabelledTree> trees;
  std::vector<int> anchors;
  if (!g1.vertices.empty()) {
    if (v1 < 0 || v1 >= static_cast<int>(g1.vertices.size()))
      throw ContractError("vertex not found in first graph");
    trees.push_back(g1.tree());
    anchors.push_back(v1);
  }
  if (!g2.vertices.empty()) {
    if (v2 < 0 || v2 >= static_cast<int>(g2.vertices.size()))
      throw ContractError("vertex not found in second graph");
    trees.push_back(g2.tree());
    anchors.push_back(v2);
  }
  GlueResult glued = glue_summands(trees, anchors);
  ConnectSumResult res;
  res.hub = glued.hub;
  res.witness = glued.witness;
  for (const auto& v : g1.vertices) res.graph.vertices.push_back(v);
  for (const auto& v : g2.vertices) res.graph.vertices.push_back(v);
  res.graph.vertices.push_back({0, 0});
  res.graph.vertices.push_back({0, 0});
  res.graph.edges = glued.tree.edges;
  return res;
}

}  // namespace tlf
