#ifndef SELFSIM_HNF_HPP
#define SELFSIM_HNF_HPP

#include "selfsim/matrix.hpp"

namespace selfsim::exact {

/// Row-style Hermite normal form h = u * m with u unimodular.
/// Pivots are positive, entries above a pivot are reduced into [0, pivot),
/// zero rows are collected at the bottom.
struct HnfResult {
    IntMatrix h;
    IntMatrix u;
    int rank = 0;
    std::vector<int> pivot_cols;
};

HnfResult hnf(const IntMatrix& m);

/// Smith normal form s = u * m * v with u, v unimodular and the diagonal
/// entries non-negative with d_i | d_{i+1}.
struct SnfResult {
    IntMatrix s;
    IntMatrix u;
    IntMatrix v;
};

SnfResult snf(const IntMatrix& m);

} // namespace selfsim::exact

#endif
