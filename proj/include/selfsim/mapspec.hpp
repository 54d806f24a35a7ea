#ifndef SELFSIM_MAPSPEC_HPP
#define SELFSIM_MAPSPEC_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/numbers.hpp"

namespace selfsim::ifs {

struct Diagnostic {
    std::string code;
    std::string message;
};

/// Either a named special point or the generic point (anything outside the
/// special set, whose fiber data is always the full pattern).
struct PointRef {
    std::optional<std::string> label;

    static PointRef generic() { return {}; }
    static PointRef special(std::string l) { return {std::move(l)}; }
    bool is_generic() const { return !label.has_value(); }
    std::string display() const { return label ? *label : std::string("generic"); }
    bool operator==(const PointRef& o) const { return label == o.label; }
};

/// Finite combinatorial presentation of a branched self-similar map:
/// an alphabet of N contraction indices, a finite special-point set, and
/// for each special point x the indices j whose contraction sends x to
/// another special point. Absent indices land outside the special set.
///
/// Everything else is derived: the expanding map h (each special point is
/// the image of exactly one source), the branch set B (points hit by two
/// or more indices), branch indices e_b with entry index sets J(b), branch
/// values C = h(B), and the postcritical set P (all forward h-iterates of
/// B). Validation enforces that B and P are disjoint, so every backward
/// orbit meets at most one branched point.
class MapSpec {
public:
    int branch_count = 0;                                    // N
    std::vector<std::string> points;                         // declaration order
    std::map<std::string, std::map<int, std::string>> gamma; // source -> index -> target
    std::string name;

    // derived by validate()
    std::map<std::string, std::string> h;              // target -> source
    std::vector<std::string> branch_set;               // B, in points order
    std::map<std::string, int> branch_index;           // e_b
    std::map<std::string, std::vector<int>> entry_set; // J(b), sorted
    std::vector<std::string> branch_values;            // C = h(B), in B order
    std::vector<std::string> postcritical;             // P, first-appearance order

    bool has_point(const std::string& l) const;
    bool is_branched(const std::string& l) const;
    /// gamma_j(x) as a special point, or nullptr when it leaves the set.
    const std::string* gamma_target(const std::string& x, int j) const;
    std::string h_apply(const std::string& y) const;
    std::string h_iterate(const std::string& x, long k) const;
};

struct ValidationResult {
    std::optional<MapSpec> spec;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return spec.has_value(); }
};

ValidationResult validate(int branch_count, const std::vector<std::string>& points,
                          const std::map<std::string, std::map<int, std::string>>& gamma,
                          const std::string& name);

/// Key-value text format:
///   branch_count = 2
///   points = ["0", "1", "half"]
///   gamma.0 = { 0 = "0", 1 = "1" }
///   gamma.1 = { 0 = "half", 1 = "half" }
ValidationResult parse_spec_text(const std::string& text, const std::string& name);

bool is_builtin(const std::string& name);
const MapSpec& builtin(const std::string& name);
/// Resolve a builtin name or load and parse a file.
ValidationResult load_spec(const std::string& name_or_path);

/// Points whose level-n fiber is not the full matrix algebra:
/// h^p(B) for p = 1..n, ordered by first appearance (p, then B order).
std::vector<std::string> singular_points(const MapSpec& spec, int n);

struct BranchWord {
    std::vector<int> word; // contraction indices applied to base, first first
    std::string base;      // element of B
};

struct LevelBranchData {
    exact::Int count; // |B| * sum_{k<n} N^k under the distinctness convention
    std::vector<std::string> branch_values; // C at level n = singular_points(n)
    std::vector<BranchWord> words;
};

LevelBranchData level_branch_counts(const MapSpec& spec, int n);

/// One family of backward orbits of length p+q from `start` through the
/// branched point `base` reached after p steps: the p-1 intermediate
/// indices are forced, the p-th index ranges over J(base), and the q
/// remaining steps are free.
struct PQOrbit {
    std::string base;
    int p = 0;
    int q = 0;
    std::vector<int> prefix;          // length p-1, uniquely determined
    std::vector<int> entry_indices;   // J(base)
    std::vector<std::string> trajectory; // start, h^{p-1}(base), ..., base
    exact::Int family_size;           // e_base * N^q
};

std::vector<PQOrbit> pq_orbits(const MapSpec& spec, const std::string& start, int p, int q);

/// d_n(x): number of distinct endpoints of length-n backward orbit words
/// from x, computed by the recursion
///   d_0 = 1,  d_n(x) = sum_{h(y)=x} d_{n-1}(y) + (N - used(x)) N^{n-1},
/// with d_n(generic) = N^n.
exact::Int backward_count(const MapSpec& spec, const PointRef& x, int n);

} // namespace selfsim::ifs

#endif
