#include "tlf/boundary.hpp"

namespace tlf {

void ExtendedQuadraticForm::validate() const {
  if (!form.is_symmetric()) throw ShapeError("form matrix must be symmetric");
  int n = form.rows();
  auto a = alpha_or_zero();
  switch (context.coeff()) {
    case KContext::Coeff::Zero:
      for (const auto& v : alpha)
        if (v != 0) throw ContractError("alpha must vanish when the coefficient group is trivial");
      break;
    case KContext::Coeff::Z:
    case KContext::Coeff::Z2:
      if (!alpha.empty() && static_cast<int>(alpha.size()) != n)
        throw ShapeError("alpha has wrong length");
      break;
  }
  if (context.characteristic()) {
    for (int i = 0; i < n; ++i)
      if ((form.at(i, i) - a[i]) % 2 != 0)
        throw ContractError("alpha must be characteristic: diagonal parity mismatch");
  } else {
    if (!form.has_even_diagonal()) throw ContractError("diagonal must be even");
  }
}

std::vector<Int> ExtendedQuadraticForm::alpha_or_zero() const {
  if (!alpha.empty()) return alpha;
  return std::vector<Int>(form.rows(), Int(0));
}

ExtendedQuadraticForm direct_sum(const ExtendedQuadraticForm& f1, const ExtendedQuadraticForm& f2) {
  if (f1.context != f2.context) throw ContractError("context mismatch in direct sum");
  ExtendedQuadraticForm f;
  f.context = f1.context;
  f.form = IntMatrix::block_diag({f1.form, f2.form});
  auto a1 = f1.alpha_or_zero(), a2 = f2.alpha_or_zero();
  f.alpha = a1;
  f.alpha.insert(f.alpha.end(), a2.begin(), a2.end());
  return f;
}

GroupElem BoundaryResult::project(const std::vector<Int>& x) const {
  int n = snf.p.rows();
  if (static_cast<int>(x.size()) != n) throw ShapeError("vector has wrong length");
  GroupElem g(kept.size());
  for (size_t t = 0; t < kept.size(); ++t) {
    Int acc(0);
    for (int j = 0; j < n; ++j) acc += snf.p.at(kept[t], j) * x[j];
    g[t] = acc;
  }
  return linking.group.reduce(g);
}

std::vector<Int> BoundaryResult::generator_lift(int i) const {
  int n = p_inverse_.rows();
  std::vector<Int> x(n);
  for (int r = 0; r < n; ++r) x[r] = p_inverse_.at(r, kept[i]);
  return x;
}

namespace {

struct Presented {
  SnfResult snf;
  std::vector<int> kept;
  FiniteAbelianGroup group;
  IntMatrix p_inverse;
  RatMatrix inverse;
  std::vector<std::vector<Int>> lifts;
};

Presented present_cokernel(const IntMatrix& a) {
  if (!a.is_symmetric()) throw ShapeError("form matrix must be symmetric");
  Presented pr;
  Int d = det(a);
  if (d == 0) throw SingularError("degenerate form has no boundary");
  pr.snf = smith_normal_form(a);
  for (int i = 0; i < static_cast<int>(pr.snf.divisors.size()); ++i)
    if (pr.snf.divisors[i] > 1) {
      pr.kept.push_back(i);
      pr.group.divisors.push_back(pr.snf.divisors[i]);
    }
  pr.p_inverse = invert_unimodular(pr.snf.p);
  pr.inverse = invert_rational(a);
  int n = a.rows();
  for (int i : pr.kept) {
    std::vector<Int> x(n);
    for (int r = 0; r < n; ++r) x[r] = pr.p_inverse.at(r, i);
    pr.lifts.push_back(std::move(x));
  }
  return pr;
}

Rat pair_inverse(const RatMatrix& inv, const std::vector<Int>& x, const std::vector<Int>& y) {
  int n = inv.rows();
  Rat acc(0);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (y[j] == 0) continue;
      acc += Rat(x[i] * y[j]) * inv.at(i, j);
    }
  }
  return acc;
}

}  // namespace

BoundaryResult boundary(const ExtendedQuadraticForm& f) {
  f.validate();
  Presented pr = present_cokernel(f.form);
  int r = pr.group.rank();
  auto alpha = f.alpha_or_zero();

  BoundaryResult res;
  res.snf = std::move(pr.snf);
  res.kept = std::move(pr.kept);
  res.inverse = std::move(pr.inverse);
  res.p_inverse_ = std::move(pr.p_inverse);
  res.linking.context = f.context;
  res.linking.group = pr.group;
  res.linking.b.assign(r, std::vector<QmodZ>(r));
  res.linking.q.assign(r, QmodZ());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      res.linking.b[i][j] = QmodZ(pair_inverse(res.inverse, pr.lifts[i], pr.lifts[j]));
  for (int i = 0; i < r; ++i) {
    Rat self = pair_inverse(res.inverse, pr.lifts[i], pr.lifts[i]);
    if (f.context.characteristic()) {
      Rat cross = pair_inverse(res.inverse, pr.lifts[i], alpha);
      res.linking.q[i] = QmodZ((self + cross) / 2);
    } else {
      res.linking.q[i] = QmodZ(self / 2);
    }
  }
  switch (f.context.coeff()) {
    case KContext::Coeff::Z:
      res.linking.beta = res.project(alpha);
      break;
    case KContext::Coeff::Z2: {
      GroupElem pa = res.project(alpha);
      for (size_t i = 0; i < pa.size(); ++i)
        pa[i] = (res.linking.group.divisors[i] % 2 == 0) ? Int(pa[i] % 2) : Int(0);
      res.linking.beta = pa;
      break;
    }
    case KContext::Coeff::Zero:
      break;
  }
  if (f.context.characteristic() && !res.linking.group.in_two_g(res.linking.beta))
    throw ContractError("boundary beta escaped 2G: alpha is not characteristic");
  return res;
}

BoundaryPairing boundary_pairing(const IntMatrix& a) {
  Presented pr = present_cokernel(a);
  int r = pr.group.rank();
  BoundaryPairing res;
  res.snf = std::move(pr.snf);
  res.kept = std::move(pr.kept);
  res.pairing.group = pr.group;
  res.pairing.b.assign(r, std::vector<QmodZ>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      res.pairing.b[i][j] = QmodZ(pair_inverse(pr.inverse, pr.lifts[i], pr.lifts[j]));
  return res;
}

bool is_nonsingular(const ExtendedQuadraticForm& f) {
  Int d = det(f.form);
  return d == 1 || d == -1;
}

bool boundary_is_trivial(const ExtendedQuadraticForm& f) {
  return boundary(f).linking.group.rank() == 0;
}

Outcome stable_sum_invariance_check(const ExtendedQuadraticForm& f_nd,
                                    const ExtendedQuadraticForm& f_ns,
                                    const IsoBudget& budget) {
  if (!is_nonsingular(f_ns)) throw ContractError("second summand must be nonsingular");
  BoundaryResult lhs = boundary(direct_sum(f_nd, f_ns));
  BoundaryResult rhs = boundary(f_nd);
  IsoResult iso = are_isomorphic(lhs.linking, rhs.linking, budget);
  return iso.outcome;
}

}  // namespace tlf
