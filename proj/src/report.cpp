#include "selfsim/report.hpp"

#include <set>
#include <sstream>

namespace selfsim::report {

using exact::IntMatrix;
using exact::RatMatrix;
using nlohmann::json;

namespace {

template <class M>
json matrix_json_impl(const M& m) {
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) entries.push_back(exact::to_string(m.at(i, j)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

void check_shape(const json& j, size_t n) {
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        fail("ParseError", "matrix object needs rows/cols/entries");
    if (j["entries"].size() != n) fail("ParseError", "matrix entry count mismatch");
}

} // namespace

json matrix_json(const IntMatrix& m) { return matrix_json_impl(m); }
json matrix_json(const RatMatrix& m) { return matrix_json_impl(m); }

IntMatrix int_matrix_from_json(const json& j) {
    int r = j.at("rows"), c = j.at("cols");
    check_shape(j, size_t(r) * size_t(c));
    IntMatrix m(r, c);
    size_t k = 0;
    for (int i = 0; i < r; ++i)
        for (int jj = 0; jj < c; ++jj) m.at(i, jj) = exact::int_from_string(j["entries"][k++]);
    return m;
}

RatMatrix rat_matrix_from_json(const json& j) {
    int r = j.at("rows"), c = j.at("cols");
    check_shape(j, size_t(r) * size_t(c));
    RatMatrix m(r, c);
    size_t k = 0;
    for (int i = 0; i < r; ++i)
        for (int jj = 0; jj < c; ++jj) m.at(i, jj) = exact::rat_from_string(j["entries"][k++]);
    return m;
}

namespace {

template <class M>
std::string render_impl(const M& m, bool approx) {
    std::vector<std::string> cells;
    size_t width = 1;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            std::string s = exact::to_string(m.at(i, j));
            if constexpr (std::is_same_v<M, RatMatrix>) {
                if (approx && !exact::is_integer(m.at(i, j))) {
                    std::ostringstream os;
                    os << s << " (" << m.at(i, j).get_d() << ")";
                    s = os.str();
                }
            }
            width = std::max(width, s.size());
            cells.push_back(std::move(s));
        }
    (void)approx;
    std::ostringstream os;
    size_t k = 0;
    for (int i = 0; i < m.rows(); ++i) {
        os << "[";
        for (int j = 0; j < m.cols(); ++j) {
            const std::string& s = cells[k++];
            os << " " << std::string(width - s.size(), ' ') << s;
        }
        os << " ]\n";
    }
    return os.str();
}

} // namespace

std::string render_matrix(const IntMatrix& m) { return render_impl(m, false); }
std::string render_matrix(const RatMatrix& m, bool approx) { return render_impl(m, approx); }

json fiber_json(const fiber::FiberDecomposition& dec) {
    json blocks = json::array();
    for (const auto& b : dec.blocks) {
        json jb{{"kind", b.kind == fiber::BlockKind::Compact ? "compact" : "singular"},
                {"size", b.algebra_size},
                {"weight", b.weight}};
        if (b.kind == fiber::BlockKind::Singular) {
            jb["base"] = b.base;
            jb["p"] = b.p;
            std::string w;
            for (int d : b.prefix) w += std::to_string(d);
            jb["prefix"] = w;
        }
        blocks.push_back(std::move(jb));
    }
    return json{{"point", dec.point.display()}, {"level", dec.n}, {"dim", dec.dim},
                {"blocks", std::move(blocks)}};
}

std::string orbits_dot(const ifs::MapSpec& spec, const std::vector<ifs::PQOrbit>& orbits) {
    std::ostringstream os;
    os << "digraph orbits {\n  rankdir=LR;\n";
    std::set<std::string> edges;
    for (const auto& o : orbits) {
        os << "  // family base=" << o.base << " p=" << o.p << " q=" << o.q
           << " size=" << exact::to_string(o.family_size) << "\n";
        for (size_t k = 1; k + 1 < o.trajectory.size(); ++k) {
            std::ostringstream e;
            e << "  \"" << o.trajectory[k - 1] << "\" -> \"" << o.trajectory[k]
              << "\" [label=\"γ" << o.prefix[k - 1] << "\"];";
            if (edges.insert(e.str()).second) os << e.str() << "\n";
        }
        std::ostringstream lbl;
        for (size_t i = 0; i < o.entry_indices.size(); ++i)
            lbl << (i ? "," : "") << "γ" << o.entry_indices[i];
        if (o.q > 0) lbl << " (x" << spec.branch_count << "^" << o.q << ")";
        std::ostringstream e;
        e << "  \"" << o.trajectory[o.trajectory.size() - 2] << "\" -> \"" << o.trajectory.back()
          << "\" [label=\"" << lbl.str() << "\", penwidth=2.0];";
        if (edges.insert(e.str()).second) os << e.str() << "\n";
    }
    os << "}\n";
    return os.str();
}

json envelope(const ifs::MapSpec& spec, json result) {
    json meta{{"spec", spec.name},
              {"branch_count", spec.branch_count},
              {"assumptions",
               json{{"connected_base", "assumed"},
                    {"level_branch_words", "distinct under genericity"}}}};
    return json{{"meta", std::move(meta)}, {"result", std::move(result)}};
}

} // namespace selfsim::report
