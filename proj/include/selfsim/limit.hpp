#ifndef SELFSIM_LIMIT_HPP
#define SELFSIM_LIMIT_HPP

#include "selfsim/traces.hpp"

namespace selfsim::dimension {

struct K1Metadata {
    bool known = false;
    std::string statement;
    std::string citation;
};

K1Metadata k1_metadata(const ifs::MapSpec& spec);

/// Everything the inductive limit analysis produces across levels
/// 0..n_max, with verdicts rather than exceptions.
struct LimitReport {
    int n_max = 0;
    int r_max = 0;
    std::vector<int> ranks;              // K0 rank per level
    std::vector<LevelMap> inclusions;    // level n -> n+1
    std::vector<LevelMap> betas;

    bool inclusions_injective = true;
    bool traces_invariant = true;
    std::string trace_note;

    std::vector<bool> phi_independent;   // per level 0..n_max
    std::vector<bool> phi_in_c_span;     // per level 0..n_max
    /// Per level: tau^{(b,r)} rows (b in declaration order, r = 0..r_max)
    /// then tau^inf, one column per canonical basis vector.
    std::vector<exact::RatMatrix> level_traces;
    exact::RatMatrix c_vectors;          // c_m rows for m = 0..n_max (first branch point)

    /// Per stage m = 1..n_max: is 2x = [rank-one class of level 1] solvable
    /// in K0 of the level-m core?
    std::vector<bool> two_x_solvable;

    K1Metadata k1;
};

LimitReport limit_report(const ifs::MapSpec& spec, int n_max, int r_max, long long size_guard);

} // namespace selfsim::dimension

#endif
