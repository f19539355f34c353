#include "tlf/json_io.hpp"

namespace tlf {

namespace {

Json int_list(const std::vector<Int>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

std::vector<Int> int_list_from(const Json& j, const char* what) {
  if (!j.is_array()) throw ContractError(std::string(what) + " must be an array");
  std::vector<Int> v;
  for (const auto& e : j) {
    if (e.is_number_integer())
      v.emplace_back(e.get<long>());
    else if (e.is_string())
      v.push_back(int_from_string(e.get<std::string>()));
    else
      throw ContractError(std::string(what) + " entries must be integers or decimal strings");
  }
  return v;
}

QmodZ qmodz_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return QmodZ(int_from_string(s), Int(1));
  return QmodZ(int_from_string(s.substr(0, slash)), int_from_string(s.substr(slash + 1)));
}

Json qmodz_table(const std::vector<std::vector<QmodZ>>& b) {
  Json rows = Json::array();
  for (const auto& row : b) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(v.str());
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

Json matrix_to_json(const IntMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (int c = 0; c < m.cols(); ++c) r.push_back(m.at(i, c).get_str());
    rows.push_back(std::move(r));
  }
  j["entries"] = std::move(rows);
  return j;
}

IntMatrix matrix_from_json(const Json& j) {
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  const Json& e = j.at("entries");
  if (static_cast<int>(e.size()) != rows) throw ShapeError("row count mismatch");
  IntMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    std::vector<Int> row = int_list_from(e.at(i), "entries row");
    if (static_cast<int>(row.size()) != cols) throw ShapeError("column count mismatch");
    for (int c = 0; c < cols; ++c) m.at(i, c) = row[c];
  }
  return m;
}

Json tree_to_json(const SymLabelledTree& t) {
  Json j;
  j["labels"] = int_list(t.labels);
  Json edges = Json::array();
  for (const auto& [a, b] : t.edges) edges.push_back(Json::array({a, b}));
  j["edges"] = std::move(edges);
  return j;
}

SymLabelledTree tree_from_json(const Json& j) {
  SymLabelledTree t;
  t.labels = int_list_from(j.at("labels"), "labels");
  for (const auto& e : j.at("edges"))
    t.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  t.validate();
  return t;
}

Json skew_tree_to_json(const SkewLabelledTree& t) {
  Json j;
  j["labels"] = Json::array();
  for (int i = 0; i < t.num_vertices; ++i) j["labels"].push_back("0");
  Json edges = Json::array(), signs = Json::array();
  for (const auto& e : t.edges) {
    edges.push_back(Json::array({e.from, e.to}));
    signs.push_back(e.sign);
  }
  j["edges"] = std::move(edges);
  j["signs"] = std::move(signs);
  return j;
}

SkewLabelledTree skew_tree_from_json(const Json& j) {
  SkewLabelledTree t;
  for (const auto& l : int_list_from(j.at("labels"), "labels")) {
    if (l != 0) throw ContractError("skew tree labels must all be 0");
    ++t.num_vertices;
  }
  const Json& edges = j.at("edges");
  const Json& signs = j.at("signs");
  if (edges.size() != signs.size()) throw ShapeError("edges and signs disagree in length");
  for (size_t i = 0; i < edges.size(); ++i)
    t.edges.push_back({edges.at(i).at(0).get<int>(), edges.at(i).at(1).get<int>(),
                       signs.at(i).get<int>()});
  t.validate();
  return t;
}

Json linking_form_to_json(const QuadraticLinkingForm& f) {
  Json j;
  j["divisors"] = int_list(f.group.divisors);
  j["b"] = qmodz_table(f.b);
  Json q = Json::array();
  for (const auto& v : f.q) q.push_back(v.str());
  j["q"] = std::move(q);
  j["beta"] = int_list(f.beta);
  j["k"] = f.context.k;
  return j;
}

QuadraticLinkingForm linking_form_from_json(const Json& j) {
  QuadraticLinkingForm f;
  f.group.divisors = int_list_from(j.at("divisors"), "divisors");
  int r = f.group.rank();
  const Json& b = j.at("b");
  if (static_cast<int>(b.size()) != r) throw ShapeError("b has wrong row count");
  f.b.assign(r, std::vector<QmodZ>(r));
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(b.at(i).size()) != r) throw ShapeError("b has wrong column count");
    for (int c = 0; c < r; ++c) f.b[i][c] = qmodz_from_string(b.at(i).at(c).get<std::string>());
  }
  for (const auto& v : j.at("q")) f.q.push_back(qmodz_from_string(v.get<std::string>()));
  if (static_cast<int>(f.q.size()) != r) throw ShapeError("q has wrong length");
  f.context = KContext::make(j.at("k").get<long>());
  if (j.contains("beta")) {
    std::vector<Int> beta = int_list_from(j.at("beta"), "beta");
    if (!beta.empty()) f.beta = f.group.reduce(beta);
  }
  if (f.beta.empty() && f.context.coeff() != KContext::Coeff::Zero) f.beta = f.group.zero();
  f.validate();
  return f;
}

Json snf_to_json(const SnfResult& s) {
  Json j;
  j["divisors"] = int_list(s.divisors);
  j["p"] = matrix_to_json(s.p);
  j["q"] = matrix_to_json(s.q);
  j["d"] = matrix_to_json(s.d);
  return j;
}

Json isomorphism_to_json(const Isomorphism& iso) {
  Json images = Json::array();
  for (const auto& img : iso.images) images.push_back(int_list(img));
  return Json{{"images", std::move(images)}};
}

Json skew_decomposition_to_json(const SkewDecomposition& d) {
  Json j;
  j["s"] = d.s;
  j["t"] = d.t;
  j["u"] = matrix_to_json(d.u);
  return j;
}

Json presentation_to_json(const Presentation& p) {
  Json j;
  j["tree"] = tree_to_json(p.tree);
  j["alpha"] = int_list(p.alpha);
  j["target"] = linking_form_to_json(p.target);
  if (p.witness) j["witness"] = isomorphism_to_json(*p.witness);
  return j;
}

Json stabilize_to_json(const StabilizeResult& r) {
  Json j;
  j["outcome"] = outcome_name(r.outcome);
  j["tree"] = tree_to_json(r.tree);
  j["alpha"] = int_list(r.alpha);
  Json c;
  c["rank"] = r.certificate.rank;
  c["signature"] = r.certificate.signature;
  c["s"] = r.certificate.s;
  c["t"] = r.certificate.t;
  c["zero_rank"] = r.certificate.zero_rank;
  c["milgram"] = r.certificate.milgram;
  c["boundary_iso"] = outcome_name(r.certificate.boundary_iso.outcome);
  if (r.certificate.boundary_iso.witness)
    c["boundary_witness"] = isomorphism_to_json(*r.certificate.boundary_iso.witness);
  if (r.certificate.isometry) c["isometry"] = matrix_to_json(*r.certificate.isometry);
  j["certificate"] = std::move(c);
  return j;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return "pass";
    case Outcome::Fail:
      return "fail";
    default:
      return "undecided";
  }
}

Outcome RunReport::overall() const {
  Outcome acc = Outcome::Pass;
  for (const auto& [name, o] : checks) {
    if (o == Outcome::Fail) return Outcome::Fail;
    if (o == Outcome::Undecided) acc = Outcome::Undecided;
  }
  return acc;
}

Json RunReport::to_json(bool with_elapsed_ms, double elapsed_ms) const {
  Json j;
  j["command"] = command;
  j["input_digest"] = input_digest;
  j["result"] = payload;
  Json cs = Json::array();
  for (const auto& [name, o] : checks) cs.push_back(Json{{"name", name}, {"outcome", outcome_name(o)}});
  j["checks"] = std::move(cs);
  j["overall"] = outcome_name(overall());
  if (with_elapsed_ms) j["elapsed_ms"] = elapsed_ms;
  return j;
}

}  // namespace tlf
