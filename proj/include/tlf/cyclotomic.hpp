#pragma once

#include <vector>

#include "tlf/numeric.hpp"

namespace tlf {

// Dense integer polynomial, little-endian coefficients.
using Poly = std::vector<Int>;

// The n-th cyclotomic polynomial, built from the Moebius product
// prod_{d | n} (x^d - 1)^{mu(n/d)}. Results are cached per n.
const Poly& cyclotomic(long n);

// Product in Z[x] / (x^n - 1); inputs must have length <= n.
Poly mul_mod_xn_minus_1(const Poly& a, const Poly& b, long n);

// Remainder of f modulo the monic polynomial phi.
Poly mod_poly(Poly f, const Poly& phi);

bool is_zero_poly(const Poly& f);

}  // namespace tlf
