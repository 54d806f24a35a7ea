#ifndef SELFSIM_TRACES_HPP
#define SELFSIM_TRACES_HPP

#include "selfsim/k0.hpp"

namespace selfsim::dimension {

/// tau^{(b,r)} on an ambient class: 1/N^r times the multiplicity of the
/// unique block C(X, b, p) with n - p = r. Classes at levels n <= r are
/// pushed through the unital embeddings to level r+1 first.
exact::Rat trace_value(const ifs::MapSpec& spec, const K0Presentation& p,
                       const std::vector<exact::Int>& v, const std::string& base, int r,
                       long long size_guard);

/// The equal-weight Hutchinson trace: common rank / N^n.
exact::Rat trace_infinity(const ifs::MapSpec& spec, const K0Presentation& p,
                          const std::vector<exact::Int>& v);

/// Pairing of a class with every tau^{(b,r)}: one row per branched point
/// (declaration order), one column per r = 0..r_max.
exact::RatMatrix phi_image(const ifs::MapSpec& spec, const K0Presentation& p,
                           const std::vector<exact::Int>& v, int r_max, long long size_guard);

/// Class of the rank-one constant projection (all entries 1/N^n).
std::vector<exact::Int> rank_one_class(const K0Presentation& p);

/// Pairing table of a whole basis: rows tau^{(b,r)} then tau^infty, one
/// column per basis vector.
struct TraceTable {
    std::vector<std::string> row_names;
    std::vector<std::string> column_names;
    exact::RatMatrix values;
};

TraceTable trace_pairing(const ifs::MapSpec& spec, int n, int r_max, long long size_guard,
                         bool use_paper_basis);

} // namespace selfsim::dimension

#endif
