#ifndef SELFSIM_LATTICE_HPP
#define SELFSIM_LATTICE_HPP

#include <optional>
#include <vector>

#include "selfsim/hnf.hpp"
#include "selfsim/matrix.hpp"

namespace selfsim::exact {

/// Subgroup of Z^ambient_dim, basis rows kept in Hermite normal form.
struct Lattice {
    int ambient_dim = 0;
    IntMatrix basis; // rank x ambient_dim, HNF, no zero rows

    int rank() const { return basis.rows(); }
    std::vector<Int> basis_row(int i) const;
};

/// Canonicalize a generating set of rows into a Lattice.
Lattice lattice_from_rows(const IntMatrix& rows);

/// HNF basis of { v in Z^cols : m v^T = 0 }.
Lattice kernel_basis(const IntMatrix& m);

bool same_lattice(const Lattice& a, const Lattice& b);

/// Integer coordinates of v in the basis, or nullopt when v is outside
/// the subgroup.
std::optional<std::vector<Int>> solve_in_lattice(const Lattice& l, const std::vector<Int>& v);

} // namespace selfsim::exact

#endif
