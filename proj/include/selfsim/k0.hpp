#ifndef SELFSIM_K0_HPP
#define SELFSIM_K0_HPP

#include <optional>

#include "selfsim/fiber.hpp"
#include "selfsim/lattice.hpp"

namespace selfsim::dimension {

/// K0 of the level-n core, presented on the free group over the fiber
/// blocks of the singular points. The lattice is the kernel of the
/// pairwise differences of the weighted-rank functionals: a class is a
/// multiplicity vector whose matrix rank agrees at every singular fiber.
/// With no singular points the presentation degenerates to the single
/// common-rank coordinate Z.
struct K0Presentation {
    int n = 0;
    bool trivial = false;
    std::vector<std::string> singular;
    std::vector<fiber::FiberDecomposition> fibers;
    std::vector<std::pair<int, int>> ambient; // (point index, block index)
    exact::IntMatrix rank_rows;               // one weighted-rank row per singular point
    exact::Lattice lattice;

    int ambient_dim() const { return int(ambient.size()); }
    const fiber::Block& block(int coord) const {
        return fibers[size_t(ambient[size_t(coord)].first)].blocks[size_t(ambient[size_t(coord)].second)];
    }
    /// Ambient coordinate of a block at a point, -1 when absent.
    int coord_of(const std::string& point, const std::string& base, int p) const;
    int compact_coord(const std::string& point) const;

    std::vector<exact::Int> identity_class() const;
    exact::Int weighted_rank(int point_index, const std::vector<exact::Int>& v) const;
    /// Common weighted rank, or nullopt when the ranks disagree.
    std::optional<exact::Int> common_rank(const std::vector<exact::Int>& v) const;
};

K0Presentation k0_finite(const ifs::MapSpec& spec, int n);

/// Explicit bases printed for the built-in maps, as integer rows in
/// ambient coordinates. Generates the same lattice as the canonical basis.
struct NamedBasis {
    std::vector<std::string> names;
    exact::IntMatrix rows;
};

std::optional<NamedBasis> paper_basis(const ifs::MapSpec& spec, const K0Presentation& p);

/// A projection family with the multiplicities of a non-negative class:
/// one matrix per singular point, all of size amplification * N^n, plus
/// the rank-r diagonal used at every other point.
struct RealizedFamily {
    int amplification = 1;
    exact::Int rank;
    std::map<std::string, exact::RatMatrix> at;

    exact::RatMatrix generic(long long dim) const;
};

RealizedFamily realize_class(const ifs::MapSpec& spec, const K0Presentation& p,
                             const std::vector<exact::Int>& v, long long size_guard,
                             long long slot_offset = 0);

/// Image of a lattice element under the unital embedding into level n+1:
/// non-negativize, realize, assemble the block-diagonal fiber over the
/// branch targets at every new singular point, decompose, subtract the
/// offset again. forced_offset = -1 picks the minimal sufficient offset.
std::vector<exact::Int> inclusion_image_ambient(const ifs::MapSpec& spec, const K0Presentation& pn,
                                                const K0Presentation& pn1,
                                                const std::vector<exact::Int>& v, long long size_guard,
                                                long forced_offset = -1, long long slot_offset = 0);

/// Image under the endomorphism induced by the constant unit-norm
/// isometry: the realized fiber is tensored with the rank-one N x N
/// all-entries-1/N matrix in the least significant digit slot.
std::vector<exact::Int> beta_image_ambient(const ifs::MapSpec& spec, const K0Presentation& pn,
                                           const K0Presentation& pn1, const std::vector<exact::Int>& v,
                                           long long size_guard, long forced_offset = -1,
                                           long long slot_offset = 0);

struct LevelMap {
    exact::IntMatrix canonical;              // level-(n+1) coords of each level-n basis vector, columns
    exact::IntMatrix raw_images;             // one ambient level-(n+1) row per domain basis vector
    std::optional<exact::IntMatrix> paper;   // in the printed bases, built-ins only
    bool injective = false;
};

LevelMap inclusion_matrix(const ifs::MapSpec& spec, int n, long long size_guard);
LevelMap beta_matrix(const ifs::MapSpec& spec, int n, long long size_guard);

/// Coordinates of v in the rows of a full-row-rank integer matrix.
std::optional<std::vector<exact::Int>> solve_in_rows(const exact::IntMatrix& rows,
                                                     const std::vector<exact::Int>& v);

} // namespace selfsim::dimension

#endif
