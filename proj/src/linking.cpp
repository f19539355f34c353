#include "tlf/linking.hpp"

#include <algorithm>
#include <set>

#include "tlf/cyclotomic.hpp"

namespace tlf {

QmodZ::QmodZ(const Int& num, const Int& den) {
  if (den == 0) throw ContractError("zero denominator");
  v_ = Rat(num, den);
  v_.canonicalize();
  normalize();
}

void QmodZ::normalize() {
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  v_ -= fl;
}

std::string QmodZ::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

void FiniteAbelianGroup::validate() const {
  for (const auto& d : divisors)
    if (d < 2) throw ContractError("cyclic order must be at least 2");
}

Int FiniteAbelianGroup::order() const {
  Int o(1);
  for (const auto& d : divisors) o *= d;
  return o;
}

Int FiniteAbelianGroup::exponent() const {
  Int e(1);
  for (const auto& d : divisors) mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), d.get_mpz_t());
  return e;
}

GroupElem FiniteAbelianGroup::reduce(const GroupElem& x) const {
  if (x.size() != divisors.size()) throw ShapeError("element has wrong rank");
  GroupElem r(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    mpz_fdiv_r(r[i].get_mpz_t(), x[i].get_mpz_t(), divisors[i].get_mpz_t());
  return r;
}

GroupElem FiniteAbelianGroup::add(const GroupElem& x, const GroupElem& y) const {
  if (x.size() != y.size()) throw ShapeError("rank mismatch");
  GroupElem s(x.size());
  for (size_t i = 0; i < x.size(); ++i) s[i] = x[i] + y[i];
  return reduce(s);
}

GroupElem FiniteAbelianGroup::neg(const GroupElem& x) const {
  GroupElem s(x.size());
  for (size_t i = 0; i < x.size(); ++i) s[i] = -x[i];
  return reduce(s);
}

GroupElem FiniteAbelianGroup::scale(const Int& c, const GroupElem& x) const {
  GroupElem s(x.size());
  for (size_t i = 0; i < x.size(); ++i) s[i] = c * x[i];
  return reduce(s);
}

bool FiniteAbelianGroup::is_zero(const GroupElem& x) const {
  for (const auto& c : x)
    if (c != 0) return false;
  return true;
}

Int FiniteAbelianGroup::element_order(const GroupElem& x) const {
  Int o(1);
  GroupElem r = reduce(x);
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) continue;
    Int g = gcd(r[i], divisors[i]);
    Int oi = divisors[i] / g;
    mpz_lcm(o.get_mpz_t(), o.get_mpz_t(), oi.get_mpz_t());
  }
  return o;
}

GroupElem FiniteAbelianGroup::element_at(const Int& index) const {
  GroupElem e(divisors.size());
  Int rest = index;
  for (size_t i = 0; i < divisors.size(); ++i) {
    mpz_fdiv_qr(rest.get_mpz_t(), e[i].get_mpz_t(), rest.get_mpz_t(), divisors[i].get_mpz_t());
  }
  return e;
}

bool FiniteAbelianGroup::in_two_g(const GroupElem& x) const {
  GroupElem r = reduce(x);
  for (size_t i = 0; i < r.size(); ++i)
    if (divisors[i] % 2 == 0 && r[i] % 2 != 0) return false;
  return true;
}

std::vector<std::pair<Int, int>> FiniteAbelianGroup::primary_invariants() const {
  std::vector<std::pair<Int, int>> inv;
  for (const auto& d : divisors) {
    Int m = d;
    for (Int p(2); p * p <= m; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
      if (m % p != 0) continue;
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      inv.emplace_back(p, e);
    }
    if (m > 1) inv.emplace_back(m, 1);
  }
  std::sort(inv.begin(), inv.end());
  return inv;
}

QmodZ LinkingPairing::b_of(const GroupElem& x, const GroupElem& y) const {
  GroupElem rx = group.reduce(x), ry = group.reduce(y);
  Rat acc(0);
  for (size_t i = 0; i < rx.size(); ++i) {
    if (rx[i] == 0) continue;
    for (size_t j = 0; j < ry.size(); ++j) {
      if (ry[j] == 0) continue;
      acc += Rat(rx[i] * ry[j]) * b[i][j].value();
    }
  }
  return QmodZ(acc);
}

void LinkingPairing::validate() const {
  group.validate();
  int n = group.rank();
  if (static_cast<int>(b.size()) != n) throw ShapeError("pairing matrix has wrong size");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(b[i].size()) != n) throw ShapeError("pairing matrix has wrong size");
    for (int j = 0; j < n; ++j) {
      if (b[i][j] != b[j][i]) throw ContractError("pairing is not symmetric");
      // d_i * b(g_i, g_j) must vanish in Q/Z.
      if (!b[i][j].scaled(group.divisors[i]).is_zero())
        throw ContractError("pairing value incompatible with generator order");
    }
  }
}

QmodZ QuadraticLinkingForm::b_of(const GroupElem& x, const GroupElem& y) const {
  return LinkingPairing{group, b}.b_of(x, y);
}

QmodZ QuadraticLinkingForm::q_of(const GroupElem& x) const {
  GroupElem r = group.reduce(x);
  Rat acc(0);
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) continue;
    // q(c g) = c q(g) + C(c, 2) b(g, g), from the refinement identity.
    acc += Rat(r[i]) * q[i].value();
    acc += Rat(r[i] * (r[i] - 1) / 2) * b[i][i].value();
    for (size_t j = i + 1; j < r.size(); ++j)
      if (r[j] != 0) acc += Rat(r[i] * r[j]) * b[i][j].value();
  }
  return QmodZ(acc);
}

bool QuadraticLinkingForm::is_homogeneous() const {
  if (context.coeff() == KContext::Coeff::Zero) return true;
  for (const auto& c : beta)
    if (c != 0) return false;
  return true;
}

void QuadraticLinkingForm::validate(const Int& exhaustive_bound) const {
  pairing().validate();
  int n = group.rank();
  if (static_cast<int>(q.size()) != n) throw ShapeError("q vector has wrong size");
  if (context.coeff() == KContext::Coeff::Zero) {
    if (!beta.empty() && !group.is_zero(beta))
      throw ContractError("beta must vanish when the coefficient group is trivial");
  } else {
    if (static_cast<int>(beta.size()) != n) throw ShapeError("beta has wrong rank");
  }
  for (int i = 0; i < n; ++i) {
    // q(d_i g_i) = q(0) = 0 via the expansion.
    GroupElem e = group.zero();
    e[i] = group.divisors[i];
    Rat v = Rat(group.divisors[i]) * q[i].value() +
            Rat(group.divisors[i] * (group.divisors[i] - 1) / 2) * b[i][i].value();
    if (!QmodZ(v).is_zero()) throw ContractError("q incompatible with generator order");
  }
  if (context.characteristic() && !group.in_two_g(beta))
    throw ContractError("beta must lie in 2G for the characteristic context");
  if (group.order() > exhaustive_bound) return;
  long o = to_long(group.order());
  std::vector<GroupElem> elems;
  for (long i = 0; i < o; ++i) elems.push_back(group.element_at(i));
  // Nonsingularity: only 0 pairs trivially with every generator.
  for (const auto& x : elems) {
    if (group.is_zero(x)) continue;
    bool allzero = true;
    for (int j = 0; j < n && allzero; ++j) {
      GroupElem g = group.zero();
      g[j] = 1;
      if (!b_of(x, g).is_zero()) allzero = false;
    }
    if (allzero) throw ContractError("pairing is singular");
  }
  for (const auto& x : elems)
    for (const auto& y : elems)
      if (q_of(group.add(x, y)) != q_of(x) + q_of(y) + b_of(x, y))
        throw IntegrityError("refinement identity fails");
  for (const auto& x : elems) {
    QmodZ defect = q_of(x) - q_of(group.neg(x));
    if (context.characteristic()) {
      if (defect != b_of(x, beta)) throw ContractError("homogeneity defect does not match beta");
    } else {
      if (!defect.is_zero()) throw ContractError("form is not homogeneous");
    }
  }
}

QuadraticLinkingForm trivial_form(KContext ctx) {
  QuadraticLinkingForm f;
  f.context = ctx;
  return f;
}

namespace {

Int pow_int(const Int& base, int e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

GroupElem make_beta(const FiniteAbelianGroup& g, KContext ctx) {
  return ctx.coeff() == KContext::Coeff::Zero ? GroupElem{} : g.zero();
}

}  // namespace

QuadraticLinkingForm catalog_cyclic(const Int& p, int j, const Int& theta, KContext ctx) {
  if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0) throw ContractError("p must be prime");
  if (j < 1) throw ContractError("j must be positive");
  Int pj = pow_int(p, j);
  if (gcd(theta, p) != 1) throw ContractError("theta must be coprime to p");
  if (theta <= -pj || theta >= pj) throw ContractError("theta out of range");
  QuadraticLinkingForm f;
  f.context = ctx;
  f.group.divisors = {pj};
  f.b = {{QmodZ(theta, pj)}};
  // For odd p an odd numerator over 2p^j does not refine b on Z_{p^j}
  // (q(p^j g) would be 1/2); the class determines the even numerator.
  Int num = theta;
  if (p % 2 == 1 && num % 2 != 0) num += pj;
  f.q = {QmodZ(num, 2 * pj)};
  f.beta = make_beta(f.group, ctx);
  return f;
}

QuadraticLinkingForm catalog_hyperbolic(int j, KContext ctx) {
  if (j < 1) throw ContractError("j must be positive");
  Int pj = pow_int(Int(2), j);
  QuadraticLinkingForm f;
  f.context = ctx;
  f.group.divisors = {pj, pj};
  f.b = {{QmodZ(), QmodZ(1, pj)}, {QmodZ(1, pj), QmodZ()}};
  f.q = {QmodZ(), QmodZ()};
  f.beta = make_beta(f.group, ctx);
  return f;
}

QuadraticLinkingForm catalog_pseudo_hyperbolic(int j, KContext ctx) {
  if (j < 1) throw ContractError("j must be positive");
  Int pj = pow_int(Int(2), j);
  QuadraticLinkingForm f;
  f.context = ctx;
  f.group.divisors = {pj, pj};
  f.b = {{QmodZ(2, pj), QmodZ(1, pj)}, {QmodZ(1, pj), QmodZ(2, pj)}};
  f.q = {QmodZ(1, pj), QmodZ(1, pj)};
  f.beta = make_beta(f.group, ctx);
  return f;
}

QuadraticLinkingForm direct_sum(const QuadraticLinkingForm& f1, const QuadraticLinkingForm& f2) {
  if (f1.context != f2.context) throw ContractError("context mismatch in direct sum");
  QuadraticLinkingForm f;
  f.context = f1.context;
  int n1 = f1.group.rank(), n2 = f2.group.rank();
  f.group.divisors = f1.group.divisors;
  f.group.divisors.insert(f.group.divisors.end(), f2.group.divisors.begin(),
                          f2.group.divisors.end());
  f.b.assign(n1 + n2, std::vector<QmodZ>(n1 + n2));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) f.b[i][j] = f1.b[i][j];
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) f.b[n1 + i][n1 + j] = f2.b[i][j];
  f.q = f1.q;
  f.q.insert(f.q.end(), f2.q.begin(), f2.q.end());
  if (f.context.coeff() != KContext::Coeff::Zero) {
    f.beta = f1.beta;
    f.beta.insert(f.beta.end(), f2.beta.begin(), f2.beta.end());
  }
  return f;
}

namespace {

// Reduce an element of G to its image in G tensor Z/2: coordinates mod 2
// at even orders, 0 at odd orders.
GroupElem mod2_image(const FiniteAbelianGroup& g, const GroupElem& x) {
  GroupElem r = g.reduce(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] = (g.divisors[i] % 2 == 0) ? Int(r[i] % 2) : Int(0);
  return r;
}

struct IsoSearch {
  const FiniteAbelianGroup& g1;
  const FiniteAbelianGroup& g2;
  const std::vector<std::vector<QmodZ>>& b1;
  const std::vector<std::vector<QmodZ>>& b2;
  const std::vector<QmodZ>* q1;  // null for pairing-only search
  const QuadraticLinkingForm* f1;
  const QuadraticLinkingForm* f2;
  long max_nodes;
  long nodes = 0;
  bool exhausted_budget = false;

  std::vector<GroupElem> elems2;
  std::vector<Int> orders2;
  std::vector<QmodZ> qvals2;
  std::vector<GroupElem> images;

  LinkingPairing pairing2() const { return LinkingPairing{g2, b2}; }

  bool bump() {
    if (++nodes > max_nodes) {
      exhausted_budget = true;
      return false;
    }
    return true;
  }

  bool leaf_ok() {
    // The generator map is a homomorphism by construction (orders were
    // checked); certify bijectivity by enumerating the image.
    long o = to_long(g1.order());
    std::set<GroupElem> image;
    for (long idx = 0; idx < o; ++idx) {
      if (!bump()) return false;
      GroupElem x = g1.element_at(idx);
      GroupElem y = g2.zero();
      for (size_t i = 0; i < images.size(); ++i)
        y = g2.add(y, g2.scale(x[i], images[i]));
      image.insert(y);
    }
    if (static_cast<long>(image.size()) != o) return false;
    if (f1) {
      // beta must be carried to beta.
      auto phi = [&](const GroupElem& x) {
        GroupElem y = g2.zero();
        for (size_t i = 0; i < images.size(); ++i) y = g2.add(y, g2.scale(x[i], images[i]));
        return y;
      };
      switch (f1->context.coeff()) {
        case KContext::Coeff::Z:
          if (phi(f1->beta) != g2.reduce(f2->beta)) return false;
          break;
        case KContext::Coeff::Z2: {
          GroupElem lift(f1->beta.begin(), f1->beta.end());
          if (mod2_image(g2, phi(g1.reduce(lift))) != mod2_image(g2, f2->beta)) return false;
          break;
        }
        case KContext::Coeff::Zero:
          break;
      }
    }
    return true;
  }

  bool dfs(size_t level) {
    if (level == g1.divisors.size()) return leaf_ok();
    LinkingPairing p2 = pairing2();
    for (size_t c = 0; c < elems2.size(); ++c) {
      if (!bump()) return false;
      const GroupElem& y = elems2[c];
      if (g1.divisors[level] % orders2[c] != 0) continue;
      if (q1 && qvals2[c] != (*q1)[level]) continue;
      if (p2.b_of(y, y) != b1[level][level]) continue;
      bool ok = true;
      for (size_t i = 0; i < level && ok; ++i)
        if (p2.b_of(y, images[i]) != b1[level][i]) ok = false;
      if (!ok) continue;
      images.push_back(y);
      if (dfs(level + 1)) return true;
      if (exhausted_budget) return false;
      images.pop_back();
    }
    return false;
  }
};

IsoResult run_iso_search(IsoSearch& s, const IsoBudget& budget, const Int& order) {
  IsoResult res;
  if (order > budget.max_group_order) {
    res.outcome = Outcome::Undecided;
    res.note = "group order exceeds budget";
    return res;
  }
  long o = to_long(order);
  for (long i = 0; i < o; ++i) {
    GroupElem e = s.g2.element_at(i);
    s.elems2.push_back(e);
    s.orders2.push_back(s.g2.element_order(e));
    if (s.q1) s.qvals2.push_back(s.f2->q_of(e));
  }
  s.max_nodes = budget.max_nodes;
  if (s.dfs(0)) {
    res.outcome = Outcome::Pass;
    res.witness = Isomorphism{s.images};
  } else if (s.exhausted_budget) {
    res.outcome = Outcome::Undecided;
    res.note = "node budget exceeded";
  } else {
    res.outcome = Outcome::Fail;
  }
  return res;
}

}  // namespace

IsoResult are_isomorphic(const QuadraticLinkingForm& f1, const QuadraticLinkingForm& f2,
                         const IsoBudget& budget) {
  if (f1.context != f2.context) throw ContractError("context mismatch in isomorphism test");
  if (f1.group.primary_invariants() != f2.group.primary_invariants())
    return IsoResult{Outcome::Fail, std::nullopt, "group invariants differ"};
  IsoSearch s{f1.group, f2.group, f1.b, f2.b, &f1.q, &f1, &f2, 0};
  return run_iso_search(s, budget, f1.group.order());
}

IsoResult are_pairings_isomorphic(const LinkingPairing& p1, const LinkingPairing& p2,
                                  const IsoBudget& budget) {
  if (p1.group.primary_invariants() != p2.group.primary_invariants())
    return IsoResult{Outcome::Fail, std::nullopt, "group invariants differ"};
  IsoSearch s{p1.group, p2.group, p1.b, p2.b, nullptr, nullptr, nullptr, 0};
  return run_iso_search(s, budget, p1.group.order());
}

int gauss_milgram(const QuadraticLinkingForm& f) {
  if (!f.is_homogeneous()) throw ContractError("Gauss sum requires a homogeneous form");
  Int order = f.group.order();
  if (order > Int(1) << 16) throw ContractError("group too large for exact Gauss sum");
  long o = to_long(order);
  long expn = to_long(f.group.exponent());
  long n = 8 * expn;

  // S = sum over G of x^(q(g) * N).
  Poly s(n, Int(0));
  for (long i = 0; i < o; ++i) {
    QmodZ qv = f.q_of(f.group.element_at(i));
    if (n % qv.den() != 0) throw IntegrityError("q value denominator does not divide 8E");
    Int e = qv.num() * (n / qv.den());
    s[mpz_get_ui(e.get_mpz_t())] += 1;
  }

  // R = sqrt|G| as a product of quadratic Gauss sums.
  Poly r{Int(1)};
  Int m = order;
  for (Int p(2); m > 1; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
    while (m % p == 0) {
      m /= p;
      Poly g(n, Int(0));
      if (p == 2) {
        // zeta_8 + zeta_8^7 = sqrt 2
        g[n / 8] += 1;
        g[7 * (n / 8)] += 1;
      } else {
        long pl = to_long(p);
        for (long t = 0; t < pl; ++t) g[((n / pl) * t * t) % n] += 1;
        if (pl % 4 == 3) {
          // Gauss sum is i sqrt p; multiply by zeta_4^{-1}.
          Poly rot(n, Int(0));
          rot[3 * (n / 4)] = 1;
          g = mul_mod_xn_minus_1(g, rot, n);
        }
      }
      r = mul_mod_xn_minus_1(r, g, n);
    }
  }

  const Poly& phi = cyclotomic(n);
  Poly s_red = mod_poly(s, phi);
  int found = -1;
  for (int sigma = 0; sigma < 8; ++sigma) {
    Poly rot(n, Int(0));
    rot[(sigma * (n / 8)) % n] = 1;
    Poly cand = mod_poly(mul_mod_xn_minus_1(r, rot, n), phi);
    // compare s_red and cand
    Poly diff = s_red;
    diff.resize(std::max(diff.size(), cand.size()), Int(0));
    for (size_t i = 0; i < cand.size(); ++i) diff[i] -= cand[i];
    if (is_zero_poly(diff)) {
      if (found >= 0) throw IntegrityError("Gauss sum matched two phases");
      found = sigma;
    }
  }
  if (found < 0) throw IntegrityError("Gauss sum has unexpected shape");
  return found;
}

}  // namespace tlf
