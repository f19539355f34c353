#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace tlf {

// Arbitrary-precision integers and rationals. All arithmetic in this
// library is exact; there is no floating point anywhere.
using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed dimensions, non-square input where square is required, etc.
struct ShapeError : Error {
  using Error::Error;
};

// A singular matrix was passed to an operation requiring det != 0.
struct SingularError : Error {
  using Error::Error;
};

// A domain invariant was violated (evenness, characteristic condition,
// precondition on catalog parameters, ...).
struct ContractError : Error {
  using Error::Error;
};

// An internal consistency check failed; indicates a bug upstream.
struct IntegrityError : Error {
  using Error::Error;
};

// A search budget ran out before the question was settled; the result is
// neither a positive nor a certified negative.
struct UndecidedError : Error {
  using Error::Error;
};

inline Int int_from_string(const std::string& s) {
  Int v;
  if (v.set_str(s, 10) != 0) throw ContractError("not a decimal integer: " + s);
  return v;
}

inline long to_long(const Int& v) {
  if (!v.fits_slong_p()) throw ContractError("integer too large for machine index");
  return v.get_si();
}

}  // namespace tlf
