#include "selfsim/mapspec.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "selfsim/errors.hpp"

namespace selfsim::ifs {

bool MapSpec::has_point(const std::string& l) const {
    return std::find(points.begin(), points.end(), l) != points.end();
}

bool MapSpec::is_branched(const std::string& l) const {
    auto it = branch_index.find(l);
    return it != branch_index.end() && it->second >= 2;
}

const std::string* MapSpec::gamma_target(const std::string& x, int j) const {
    auto it = gamma.find(x);
    if (it == gamma.end()) return nullptr;
    auto jt = it->second.find(j);
    return jt == it->second.end() ? nullptr : &jt->second;
}

std::string MapSpec::h_apply(const std::string& y) const {
    auto it = h.find(y);
    if (it == h.end()) fail("UnknownPoint", "'" + y + "' is not a special point");
    return it->second;
}

std::string MapSpec::h_iterate(const std::string& x, long k) const {
    if (!has_point(x)) fail("UnknownPoint", "'" + x + "' is not a special point");
    std::string cur = x;
    for (long i = 0; i < k; ++i) cur = h_apply(cur);
    return cur;
}

ValidationResult validate(int branch_count, const std::vector<std::string>& points,
                          const std::map<std::string, std::map<int, std::string>>& gamma,
                          const std::string& name) {
    ValidationResult res;
    auto& diag = res.diagnostics;
    auto add = [&](std::string code, std::string msg) { diag.push_back({std::move(code), std::move(msg)}); };

    if (branch_count < 2) add("BadBranchCount", "branch_count must be at least 2");
    std::set<std::string> seen;
    for (const auto& p : points)
        if (!seen.insert(p).second) add("DuplicatePoint", "point '" + p + "' declared twice");

    MapSpec spec;
    spec.branch_count = branch_count;
    spec.points = points;
    spec.gamma = gamma;
    spec.name = name;

    // h is defined by "y is the target of x": each point must be a target
    // of exactly one source.
    std::map<std::string, std::string> target_source;
    std::map<std::string, std::vector<int>> target_indices;
    for (const auto& [src, table] : gamma) {
        if (!seen.count(src)) add("UnknownPoint", "gamma source '" + src + "' is not in points");
        for (const auto& [j, dst] : table) {
            if (j < 0 || j >= branch_count)
                add("IndexOutOfRange", "gamma." + src + " uses index " + std::to_string(j));
            if (!seen.count(dst)) {
                add("UnknownTarget", "gamma." + src + " maps to unknown point '" + dst + "'");
                continue;
            }
            auto it = target_source.find(dst);
            if (it != target_source.end() && it->second != src) {
                add("DuplicateTarget", "point '" + dst + "' is a gamma target of both '" + it->second +
                                           "' and '" + src + "'");
                continue;
            }
            target_source[dst] = src;
            target_indices[dst].push_back(j);
        }
        if (int(table.size()) > branch_count)
            add("TooManyBranches", "gamma." + src + " defines more than N indices");
    }
    for (const auto& p : points)
        if (!target_source.count(p)) add("OrphanPoint", "point '" + p + "' is never a gamma target (h not total)");

    if (!diag.empty()) return res;

    spec.h = target_source;
    for (auto& [dst, idx] : target_indices) std::sort(idx.begin(), idx.end());
    for (const auto& p : points) {
        const auto& idx = target_indices[p];
        if (int(idx.size()) >= 2) {
            spec.branch_set.push_back(p);
            spec.branch_index[p] = int(idx.size());
            spec.entry_set[p] = idx;
        }
    }
    // C = h(B) and the postcritical set, both in first-appearance order
    std::set<std::string> have;
    for (const auto& b : spec.branch_set) {
        const std::string c = spec.h.at(b);
        if (have.insert(c).second) spec.branch_values.push_back(c);
    }
    have.clear();
    for (const auto& b : spec.branch_set) {
        std::string cur = b;
        std::set<std::string> visited;
        while (visited.insert(cur).second) {
            cur = spec.h.at(cur);
            if (have.insert(cur).second) spec.postcritical.push_back(cur);
        }
    }
    for (const auto& b : spec.branch_set)
        if (std::find(spec.postcritical.begin(), spec.postcritical.end(), b) != spec.postcritical.end())
            add("BranchOnPostcritical", "branched point '" + b + "' lies on the postcritical set");

    if (!diag.empty()) return res;
    res.spec = std::move(spec);
    return res;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s0, std::vector<Diagnostic>& diag) {
    std::string s = trim(s0);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    if (!s.empty() && (s.front() == '"' || s.back() == '"'))
        diag.push_back({"ParseError", "unbalanced quotes in '" + s0 + "'"});
    return s;
}

std::vector<std::string> split_top_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    bool in_quote = false;
    for (char ch : s) {
        if (ch == '"') in_quote = !in_quote;
        if (ch == ',' && !in_quote) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty() || !parts.empty()) parts.push_back(cur);
    return parts;
}

} // namespace

ValidationResult parse_spec_text(const std::string& text, const std::string& name) {
    ValidationResult res;
    auto& diag = res.diagnostics;
    int branch_count = 0;
    bool have_n = false;
    std::vector<std::string> points;
    std::map<std::string, std::map<int, std::string>> gamma;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            diag.push_back({"ParseError", "line " + std::to_string(lineno) + ": expected key = value"});
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "branch_count") {
            try {
                branch_count = std::stoi(val);
                have_n = true;
            } catch (...) {
                diag.push_back({"ParseError", "line " + std::to_string(lineno) + ": bad branch_count"});
            }
        } else if (key == "points") {
            if (val.size() < 2 || val.front() != '[' || val.back() != ']') {
                diag.push_back({"ParseError", "line " + std::to_string(lineno) + ": points must be [..]"});
                continue;
            }
            for (const auto& part : split_top_commas(val.substr(1, val.size() - 2)))
                if (!trim(part).empty()) points.push_back(unquote(part, diag));
        } else if (key.rfind("gamma.", 0) == 0) {
            std::string src = unquote(key.substr(6), diag);
            if (val.size() < 2 || val.front() != '{' || val.back() != '}') {
                diag.push_back({"ParseError", "line " + std::to_string(lineno) + ": gamma table must be {..}"});
                continue;
            }
            for (const auto& part : split_top_commas(val.substr(1, val.size() - 2))) {
                if (trim(part).empty()) continue;
                auto e2 = part.find('=');
                if (e2 == std::string::npos) {
                    diag.push_back({"ParseError", "line " + std::to_string(lineno) + ": expected j = \"label\""});
                    continue;
                }
                int j = -1;
                try {
                    j = std::stoi(trim(part.substr(0, e2)));
                } catch (...) {
                    diag.push_back({"ParseError", "line " + std::to_string(lineno) + ": bad index"});
                    continue;
                }
                if (gamma[src].count(j))
                    diag.push_back({"DuplicateIndex", "gamma." + src + " defines index " +
                                                          std::to_string(j) + " twice"});
                gamma[src][j] = unquote(part.substr(e2 + 1), diag);
            }
        } else {
            diag.push_back({"ParseError", "line " + std::to_string(lineno) + ": unknown key '" + key + "'"});
        }
    }
    if (!have_n) diag.push_back({"ParseError", "missing branch_count"});
    if (points.empty()) diag.push_back({"ParseError", "missing points"});
    if (!diag.empty()) return res;
    return validate(branch_count, points, gamma, name);
}

namespace {

MapSpec make_builtin(int n, std::vector<std::string> pts,
                     std::map<std::string, std::map<int, std::string>> g, const std::string& name) {
    auto r = validate(n, pts, g, name);
    if (!r.ok()) fail("Internal", "builtin '" + name + "' failed validation");
    return *r.spec;
}

} // namespace

bool is_builtin(const std::string& name) {
    return name == "tent" || name == "gasket" || name == "fullshift2";
}

const MapSpec& builtin(const std::string& name) {
    static const MapSpec tent = make_builtin(
        2, {"0", "1", "half"},
        {{"0", {{0, "0"}, {1, "1"}}}, {"1", {{0, "half"}, {1, "half"}}}}, "tent");
    static const MapSpec gasket = make_builtin(
        3, {"P", "Q", "R", "S", "T", "U"},
        {{"P", {{0, "P"}, {1, "T"}, {2, "T"}}},
         {"Q", {{0, "S"}, {1, "S"}, {2, "R"}}},
         {"R", {{0, "U"}, {1, "Q"}, {2, "U"}}}},
        "gasket");
    static const MapSpec fullshift2 = make_builtin(
        2, {"0", "1"}, {{"0", {{0, "0"}}}, {"1", {{1, "1"}}}}, "fullshift2");
    if (name == "tent") return tent;
    if (name == "gasket") return gasket;
    if (name == "fullshift2") return fullshift2;
    fail("UnknownBuiltin", "no builtin named '" + name + "'");
}

ValidationResult load_spec(const std::string& name_or_path) {
    if (is_builtin(name_or_path)) {
        ValidationResult r;
        r.spec = builtin(name_or_path);
        return r;
    }
    std::ifstream f(name_or_path);
    if (!f) {
        ValidationResult r;
        r.diagnostics.push_back({"ParseError", "cannot open '" + name_or_path + "'"});
        return r;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    std::string stem = name_or_path;
    if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return parse_spec_text(buf.str(), stem);
}

std::vector<std::string> singular_points(const MapSpec& spec, int n) {
    std::vector<std::string> out;
    std::set<std::string> have;
    for (int p = 1; p <= n; ++p)
        for (const auto& b : spec.branch_set) {
            std::string x = spec.h_iterate(b, p);
            if (have.insert(x).second) out.push_back(x);
        }
    return out;
}

LevelBranchData level_branch_counts(const MapSpec& spec, int n) {
    if (n < 1) fail("LevelZero", "level must be at least 1");
    LevelBranchData out;
    out.branch_values = singular_points(spec, n);
    const int N = spec.branch_count;
    exact::Int per(0), pw(1);
    for (int k = 0; k < n; ++k) {
        per += pw;
        pw *= N;
    }
    out.count = exact::Int(long(spec.branch_set.size())) * per;
    // words gamma_{j_k}..gamma_{j_1}(b), 0 <= k <= n-1, distinct by convention
    for (int k = 0; k < n; ++k) {
        long long total = exact::pow_ll(N, k);
        for (long long w = 0; w < total; ++w)
            for (const auto& b : spec.branch_set) {
                BranchWord bw;
                bw.base = b;
                long long rest = w;
                for (int d = 0; d < k; ++d) {
                    bw.word.insert(bw.word.begin(), int(rest % N));
                    rest /= N;
                }
                out.words.push_back(std::move(bw));
            }
    }
    return out;
}

std::vector<PQOrbit> pq_orbits(const MapSpec& spec, const std::string& start, int p, int q) {
    if (!spec.has_point(start)) fail("UnknownPoint", "'" + start + "' is not a special point");
    std::vector<PQOrbit> out;
    if (p < 1) return out;
    for (const auto& base : spec.branch_set) {
        if (spec.h_iterate(base, p) != start) continue;
        PQOrbit orbit;
        orbit.base = base;
        orbit.p = p;
        orbit.q = q;
        orbit.entry_indices = spec.entry_set.at(base);
        // trajectory start = x_0, x_k = h^{p-k}(base)
        orbit.trajectory.push_back(start);
        for (int k = 1; k <= p; ++k) orbit.trajectory.push_back(spec.h_iterate(base, p - k));
        for (int k = 1; k < p; ++k) {
            const std::string& from = orbit.trajectory[size_t(k) - 1];
            const std::string& to = orbit.trajectory[size_t(k)];
            int found = -1;
            for (const auto& [j, dst] : spec.gamma.at(from))
                if (dst == to) {
                    found = j;
                    break; // unique: an intermediate point is never branched
                }
            if (found < 0) fail("Internal", "broken trajectory from '" + from + "'");
            orbit.prefix.push_back(found);
        }
        exact::Int fam(spec.branch_index.at(base));
        for (int i = 0; i < q; ++i) fam *= spec.branch_count;
        orbit.family_size = fam;
        out.push_back(std::move(orbit));
    }
    return out;
}

exact::Int backward_count(const MapSpec& spec, const PointRef& x, int n) {
    if (n < 0) fail("LevelZero", "level must be non-negative");
    const int N = spec.branch_count;
    exact::Int npow(1);
    if (x.is_generic()) {
        for (int i = 0; i < n; ++i) npow *= N;
        return npow;
    }
    if (!spec.has_point(*x.label)) fail("UnknownPoint", "'" + *x.label + "' is not a special point");
    // d over all special points level by level
    std::map<std::string, exact::Int> d;
    for (const auto& p : spec.points) d[p] = 1;
    exact::Int generic_prev(1); // N^{k-1}
    for (int k = 1; k <= n; ++k) {
        std::map<std::string, exact::Int> next;
        for (const auto& p : spec.points) {
            exact::Int acc(0);
            int used = 0;
            auto it = spec.gamma.find(p);
            if (it != spec.gamma.end()) {
                used = int(it->second.size());
                std::set<std::string> targets;
                for (const auto& [j, dst] : it->second) targets.insert(dst);
                for (const auto& dst : targets) acc += d.at(dst);
            }
            acc += exact::Int(N - used) * generic_prev;
            next[p] = acc;
        }
        d = std::move(next);
        generic_prev *= N;
    }
    return d.at(*x.label);
}

} // namespace selfsim::ifs
