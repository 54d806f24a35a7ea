#ifndef SELFSIM_ELIMINATION_HPP
#define SELFSIM_ELIMINATION_HPP

#include "selfsim/matrix.hpp"

namespace selfsim::exact {

/// Rank via fraction-free (Bareiss) elimination. The rational overload
/// clears row denominators first; intermediate values stay integral.
int rank(const IntMatrix& m);
int rank(const RatMatrix& m);
int rank_serial(const IntMatrix& m);
int rank_serial(const RatMatrix& m);

/// Determinant of a square integer matrix, fraction-free.
Int det(const IntMatrix& m);

} // namespace selfsim::exact

#endif
