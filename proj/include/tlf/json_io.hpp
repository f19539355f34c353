#pragma once

#include <json.hpp>

#include "tlf/boundary.hpp"
#include "tlf/realize.hpp"
#include "tlf/skew.hpp"
#include "tlf/tree.hpp"

namespace tlf {

// Key order is fixed and big integers travel as decimal strings, so the
// serialized output is byte-deterministic.
using Json = nlohmann::ordered_json;

Json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j);

Json tree_to_json(const SymLabelledTree& t);
SymLabelledTree tree_from_json(const Json& j);

Json skew_tree_to_json(const SkewLabelledTree& t);
SkewLabelledTree skew_tree_from_json(const Json& j);

Json linking_form_to_json(const QuadraticLinkingForm& f);
QuadraticLinkingForm linking_form_from_json(const Json& j);

Json snf_to_json(const SnfResult& s);
Json isomorphism_to_json(const Isomorphism& iso);
Json skew_decomposition_to_json(const SkewDecomposition& d);
Json presentation_to_json(const Presentation& p);
Json stabilize_to_json(const StabilizeResult& r);

const char* outcome_name(Outcome o);

// Named check lines aggregated into the run report; an Undecided check
// is never folded into a pass.
struct RunReport {
  std::string command;
  std::string input_digest;  // FNV-1a hash of the raw input, hex
  std::vector<std::pair<std::string, Outcome>> checks;
  Json payload;

  void add_check(const std::string& name, Outcome o) { checks.emplace_back(name, o); }
  Outcome overall() const;
  Json to_json(bool with_elapsed_ms = false, double elapsed_ms = 0.0) const;
};

}  // namespace tlf
