#ifndef SELFSIM_FIBER_HPP
#define SELFSIM_FIBER_HPP

#include <string>
#include <vector>

#include "selfsim/mapspec.hpp"
#include "selfsim/matrix.hpp"

namespace selfsim::fiber {

enum class BlockKind { Compact, Singular };

/// One direct summand of a fiber of the level-n core at a point.
/// Indices into the N^n x N^n ambient matrix use the convention that the
/// most significant N-adic digit is the first contraction applied to the
/// fiber point.
struct Block {
    BlockKind kind = BlockKind::Compact;
    std::string base;        // branched point R (singular blocks)
    int p = 0;               // h^p(R) = fiber point
    std::vector<int> prefix; // forced index word of length p-1
    long long algebra_size = 0; // d_n(P) for compact, N^{n-p} for singular
    int weight = 1;             // matrix rank of a minimal projection

    std::string tag() const; // "compact" or "C(R,p)@prefix"
};

struct FiberDecomposition {
    ifs::PointRef point;
    int n = 0;
    long long dim = 0; // N^n
    std::vector<Block> blocks; // compact first, then p ascending, B order
};

/// Classes of length-n index words with equal endpoint: each class is a
/// singleton except when the trajectory meets a branched point b, in which
/// case the class has exactly e_b members differing in that digit.
struct WordClasses {
    int n = 0;
    long long word_count = 0;
    std::vector<long long> class_of;           // word -> class id
    std::vector<std::vector<long long>> members; // class id -> sorted words
};

WordClasses endpoint_classes(const ifs::MapSpec& spec, const ifs::PointRef& point, int n);

FiberDecomposition fiber_decomposition(const ifs::MapSpec& spec, const ifs::PointRef& point, int n);

/// Identification projection and the central projections of the singular
/// blocks, all of size amplification * N^n.
struct FiberMatrices {
    int amplification = 1;
    exact::RatMatrix q;
    std::vector<exact::RatMatrix> central; // one per singular block, block order
};

FiberMatrices build_fiber_matrices(const ifs::MapSpec& spec, const FiberDecomposition& dec,
                                   long long size_guard, int amplification = 1);

/// Designated minimal projection for a block. Slots enumerate a maximal
/// family of pairwise orthogonal choices: slot s of a singular block uses
/// copy s / N^{n-p} and suffix word s % N^{n-p}; slot s of the compact
/// block uses copy s / d and endpoint class s % d.
exact::RatMatrix minimal_projection(const ifs::MapSpec& spec, const FiberDecomposition& dec,
                                    int block_index, long long slot = 0, int amplification = 1);

/// In-place accumulation of the same projection (slots are orthogonal, so
/// repeated calls build the direct sum).
void add_minimal_projection(const ifs::MapSpec& spec, const FiberDecomposition& dec, int block_index,
                            long long slot, int amplification, exact::RatMatrix& into);

/// Block-diagonal placement of t at the listed digit words.
exact::RatMatrix pi_embed(int branch_count, int q, const std::vector<std::vector<int>>& positions,
                          const exact::RatMatrix& t);

/// t placed at the (i,i), (i,j), (j,i), (j,j) block positions.
exact::RatMatrix sigma_embed(int branch_count, int q, const std::vector<int>& word_i,
                             const std::vector<int>& word_j, const exact::RatMatrix& t);

/// Multiplicity of each block in a projection of the fiber algebra.
/// Requires t idempotent and symmetric and commuting with q and every
/// central projection; the amplification is inferred from the size of t.
std::vector<exact::Int> decompose_projection(const ifs::MapSpec& spec, const FiberDecomposition& dec,
                                             const exact::RatMatrix& t, long long size_guard);

std::vector<exact::Int> identity_multiplicities(const FiberDecomposition& dec);

long long default_size_guard();

long long word_value(int branch_count, const std::vector<int>& word);
std::vector<int> word_digits(int branch_count, long long value, int length);

} // namespace selfsim::fiber

#endif
