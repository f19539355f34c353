#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tlf/matrix.hpp"

namespace tlf {

// Element of Q/Z, stored as the normalized representative in [0, 1).
class QmodZ {
 public:
  QmodZ() : v_(0) {}
  explicit QmodZ(const Rat& r) : v_(r) { normalize(); }
  QmodZ(const Int& num, const Int& den);

  const Rat& value() const { return v_; }
  Int num() const { return v_.get_num(); }
  Int den() const { return v_.get_den(); }
  bool is_zero() const { return v_ == 0; }
  std::string str() const;

  // c * this in Q/Z.
  QmodZ scaled(const Int& c) const { return QmodZ(Rat(c) * v_); }

  friend QmodZ operator+(const QmodZ& a, const QmodZ& b) { return QmodZ(a.v_ + b.v_); }
  friend QmodZ operator-(const QmodZ& a, const QmodZ& b) { return QmodZ(a.v_ - b.v_); }
  friend bool operator==(const QmodZ& a, const QmodZ& b) { return a.v_ == b.v_; }
  friend bool operator!=(const QmodZ& a, const QmodZ& b) { return a.v_ != b.v_; }
  friend bool operator<(const QmodZ& a, const QmodZ& b) { return a.v_ < b.v_; }

 private:
  void normalize();
  Rat v_;
};

// Dimension context: the coefficient group pi_{2k-1}(SO) cycles through
// Z, Z/2, Z, 0 as k runs through 0, 1, 2, 3 mod 4; the characteristic
// condition on alpha is special to k = 2 and k = 4.
struct KContext {
  enum class Coeff { Z, Z2, Zero };

  long k = 3;

  static KContext make(long k) {
    if (k < 2) throw ContractError("k must be at least 2");
    return KContext{k};
  }
  Coeff coeff() const {
    switch (((k % 4) + 4) % 4) {
      case 0:
      case 2:
        return Coeff::Z;
      case 1:
        return Coeff::Z2;
      default:
        return Coeff::Zero;
    }
  }
  bool characteristic() const { return k == 2 || k == 4; }
  friend bool operator==(const KContext& a, const KContext& b) { return a.k == b.k; }
  friend bool operator!=(const KContext& a, const KContext& b) { return a.k != b.k; }
};

// Elements are coefficient vectors against the cyclic generators.
using GroupElem = std::vector<Int>;

struct FiniteAbelianGroup {
  std::vector<Int> divisors;  // order of each cyclic generator, all >= 2

  int rank() const { return static_cast<int>(divisors.size()); }
  void validate() const;
  Int order() const;
  Int exponent() const;

  GroupElem zero() const { return GroupElem(divisors.size(), Int(0)); }
  GroupElem reduce(const GroupElem& x) const;
  GroupElem add(const GroupElem& x, const GroupElem& y) const;
  GroupElem neg(const GroupElem& x) const;
  GroupElem scale(const Int& c, const GroupElem& x) const;
  bool is_zero(const GroupElem& x) const;
  Int element_order(const GroupElem& x) const;
  // Mixed-radix enumeration; index in [0, order()).
  GroupElem element_at(const Int& index) const;
  // Membership in the subgroup of doubled elements.
  bool in_two_g(const GroupElem& x) const;

  // Multiset of prime-power orders (p, j), sorted; equal multisets are
  // necessary and sufficient for abstract group isomorphism.
  std::vector<std::pair<Int, int>> primary_invariants() const;
};

// Symmetric pairing b: G x G -> Q/Z without a quadratic refinement; used
// where the refinement is unavailable (odd-diagonal forms).
struct LinkingPairing {
  FiniteAbelianGroup group;
  std::vector<std::vector<QmodZ>> b;  // values on generator pairs

  QmodZ b_of(const GroupElem& x, const GroupElem& y) const;
  void validate() const;
};

// Extended quadratic linking form (G, b, q, beta). q is stored on
// generators and extended to sums through the refinement identity
//   q(x + y) = q(x) + q(y) + b(x, y),
// which is valid whether or not q is homogeneous. beta is empty when the
// coefficient group is trivial, and lives mod 2 when it is Z/2.
struct QuadraticLinkingForm {
  FiniteAbelianGroup group;
  std::vector<std::vector<QmodZ>> b;
  std::vector<QmodZ> q;
  GroupElem beta;
  KContext context;

  QmodZ b_of(const GroupElem& x, const GroupElem& y) const;
  QmodZ q_of(const GroupElem& x) const;
  bool is_homogeneous() const;
  LinkingPairing pairing() const { return LinkingPairing{group, b}; }

  // Structural checks plus exhaustive identity checks when the group
  // order is at most exhaustive_bound.
  void validate(const Int& exhaustive_bound = 256) const;
};

QuadraticLinkingForm trivial_form(KContext ctx = {});

// Indecomposable catalog. Cyclic: (Z_{p^j}, b = theta/p^j, q = theta/2p^j);
// for odd p with odd theta the numerator of q is shifted by p^j, the
// unique choice making q a refinement of b on Z_{p^j}.
QuadraticLinkingForm catalog_cyclic(const Int& p, int j, const Int& theta, KContext ctx = {});
// Hyperbolic H(Z_{2^j}) and pseudo-hyperbolic F(Z_{2^j}) on two generators.
QuadraticLinkingForm catalog_hyperbolic(int j, KContext ctx = {});
QuadraticLinkingForm catalog_pseudo_hyperbolic(int j, KContext ctx = {});

QuadraticLinkingForm direct_sum(const QuadraticLinkingForm& f1, const QuadraticLinkingForm& f2);

enum class Outcome { Pass, Fail, Undecided };

struct IsoBudget {
  Int max_group_order = 4096;
  long max_nodes = 5'000'000;
};

// Images of the first form's generators in the second group.
struct Isomorphism {
  std::vector<GroupElem> images;
};

struct IsoResult {
  Outcome outcome = Outcome::Undecided;
  std::optional<Isomorphism> witness;
  std::string note;
};

// Exhaustive generator-image search; Fail is a certified negative,
// Undecided is only returned when a budget is exceeded.
IsoResult are_isomorphic(const QuadraticLinkingForm& f1, const QuadraticLinkingForm& f2,
                         const IsoBudget& budget = {});
IsoResult are_pairings_isomorphic(const LinkingPairing& p1, const LinkingPairing& p2,
                                  const IsoBudget& budget = {});

// The unique sigma mod 8 with sum_x exp(2 pi i q(x)) = sqrt|G| zeta_8^sigma,
// computed exactly in the cyclotomic ring Z[zeta_{8 exponent(G)}].
// Requires a homogeneous form.
int gauss_milgram(const QuadraticLinkingForm& f);

}  // namespace tlf
