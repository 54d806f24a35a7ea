#ifndef SELFSIM_NUMBERS_HPP
#define SELFSIM_NUMBERS_HPP

#include <gmpxx.h>

#include <string>

#include "selfsim/errors.hpp"

namespace selfsim::exact {

// Arbitrary-precision scalars. Nothing in this library touches floating
// point; decimal renderings for humans are produced at the output layer only.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat to_rat(const Int& n) { return Rat(n); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline std::string to_string(const Int& n) { return n.get_str(); }

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rat& r) {
    if (is_integer(r)) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Int int_from_string(const std::string& s) {
    Int n;
    if (n.set_str(s, 10) != 0) fail("ParseError", "bad integer literal '" + s + "'");
    return n;
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) fail("ParseError", "bad rational literal '" + s + "'");
    if (r.get_den() <= 0) fail("ParseError", "non-positive denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

inline long long to_ll(const Int& n) {
    if (!n.fits_slong_p()) fail("Overflow", "integer does not fit a machine word");
    return n.get_si();
}

inline long long pow_ll(long long base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace selfsim::exact

#endif
