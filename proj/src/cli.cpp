#include "selfsim/cli.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "selfsim/report.hpp"

namespace selfsim::cli {

using nlohmann::json;

namespace {

struct Options {
    std::string command;
    std::string source;
    int level = 1;
    int max_level = 4;
    int r_max = 6;
    int depth = 3;
    int q = 0;
    std::string point;
    std::string format = "text";
    bool matrices = false;
    bool paper = false;
    bool approx = false;
    long long size_guard = 0;
};

long long effective_guard(const Options& o) {
    return o.size_guard > 0 ? o.size_guard : fiber::default_size_guard();
}

ifs::PointRef parse_point(const ifs::MapSpec& spec, const std::string& p) {
    if (p == "generic") return ifs::PointRef::generic();
    if (!spec.has_point(p)) fail("UnknownPoint", "'" + p + "' is not a special point");
    return ifs::PointRef::special(p);
}

std::string block_sum(const fiber::FiberDecomposition& dec) {
    std::ostringstream os;
    for (size_t i = 0; i < dec.blocks.size(); ++i) {
        if (i) os << " + ";
        os << "M_" << dec.blocks[i].algebra_size;
        if (dec.blocks[i].weight != 1) os << "(w=" << dec.blocks[i].weight << ")";
    }
    return os.str();
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
    auto r = ifs::load_spec(o.source);
    if (o.format == "json") {
        json diags = json::array();
        for (const auto& d : r.diagnostics) diags.push_back({{"code", d.code}, {"message", d.message}});
        json j{{"valid", r.ok()}, {"diagnostics", std::move(diags)}};
        if (r.ok()) {
            const auto& s = *r.spec;
            j["derived"] = {{"h", s.h},
                            {"branch_set", s.branch_set},
                            {"branch_values", s.branch_values},
                            {"postcritical", s.postcritical}};
        }
        out << (r.ok() ? report::envelope(*r.spec, j) : json{{"result", j}}).dump(2) << "\n";
        return r.ok() ? 0 : 1;
    }
    if (!r.ok()) {
        for (const auto& d : r.diagnostics) out << d.code << ": " << d.message << "\n";
        return 1;
    }
    const auto& s = *r.spec;
    out << "valid map spec '" << s.name << "' with N = " << s.branch_count << "\n";
    auto list = [&](const char* label, const std::vector<std::string>& v) {
        out << label << " = {";
        for (size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
        out << "}\n";
    };
    out << "h:";
    for (const auto& p : s.points) out << " " << p << "->" << s.h.at(p);
    out << "\n";
    list("B", s.branch_set);
    list("C", s.branch_values);
    list("P", s.postcritical);
    for (const auto& b : s.branch_set) {
        out << "e(" << b << ") = " << s.branch_index.at(b) << ", J = {";
        const auto& js = s.entry_set.at(b);
        for (size_t i = 0; i < js.size(); ++i) out << (i ? "," : "") << js[i];
        out << "}\n";
    }
    return 0;
}

int cmd_orbits(const Options& o, std::ostream& out, std::ostream&) {
    auto loaded = ifs::load_spec(o.source);
    const auto& spec = *loaded.spec;
    if (o.point.empty()) fail("UnknownPoint", "orbits needs --point");
    ifs::PointRef p = parse_point(spec, o.point);
    if (p.is_generic()) fail("UnknownPoint", "orbits needs a special point");
    std::vector<ifs::PQOrbit> orbits;
    for (int len = 1; len <= o.depth; ++len)
        for (auto& orb : ifs::pq_orbits(spec, *p.label, len, o.q)) orbits.push_back(std::move(orb));
    if (o.format == "dot") {
        out << report::orbits_dot(spec, orbits);
        return 0;
    }
    if (o.format == "json") {
        json arr = json::array();
        for (const auto& orb : orbits) {
            json jo{{"base", orb.base}, {"p", orb.p},        {"q", orb.q},
                    {"prefix", orb.prefix}, {"entry_indices", orb.entry_indices},
                    {"trajectory", orb.trajectory}, {"family_size", exact::to_string(orb.family_size)}};
            arr.push_back(std::move(jo));
        }
        out << report::envelope(spec, json{{"orbits", std::move(arr)}}).dump(2) << "\n";
        return 0;
    }
    for (const auto& orb : orbits) {
        for (size_t k = 0; k + 1 < orb.trajectory.size(); ++k) {
            out << orb.trajectory[k];
            if (k + 2 < orb.trajectory.size())
                out << " -g" << orb.prefix[k] << "-> ";
            else {
                out << " ={";
                for (size_t i = 0; i < orb.entry_indices.size(); ++i)
                    out << (i ? "," : "") << "g" << orb.entry_indices[i];
                out << "}=> ";
            }
        }
        out << orb.trajectory.back() << "   (p=" << orb.p << ", q=" << orb.q
            << ", family size " << exact::to_string(orb.family_size) << ")\n";
    }
    if (orbits.empty()) out << "no p-q orbits through " << o.point << " up to depth " << o.depth << "\n";
    return 0;
}

int cmd_branch_sets(const Options& o, std::ostream& out, std::ostream&) {
    auto loaded = ifs::load_spec(o.source);
    const auto& spec = *loaded.spec;
    auto data = ifs::level_branch_counts(spec, o.level);
    if (o.format == "json") {
        json words = json::array();
        for (const auto& w : data.words) {
            std::string ws;
            for (int d : w.word) ws += std::to_string(d);
            words.push_back({{"base", w.base}, {"word", ws}});
        }
        json j{{"level", o.level},
               {"count", exact::to_string(data.count)},
               {"count_convention", "distinct under genericity"},
               {"branch_values", data.branch_values},
               {"words", std::move(words)}};
        out << report::envelope(spec, std::move(j)).dump(2) << "\n";
        return 0;
    }
    out << "|B(" << o.level << ")| = " << exact::to_string(data.count)
        << "  (word count, under genericity)\n";
    out << "C(" << o.level << ") = {";
    for (size_t i = 0; i < data.branch_values.size(); ++i)
        out << (i ? ", " : "") << data.branch_values[i];
    out << "}\n";
    return 0;
}

int cmd_fibers(const Options& o, std::ostream& out, std::ostream&) {
    auto loaded = ifs::load_spec(o.source);
    const auto& spec = *loaded.spec;
    std::vector<ifs::PointRef> pts;
    if (!o.point.empty()) {
        pts.push_back(parse_point(spec, o.point));
    } else {
        for (const auto& x : ifs::singular_points(spec, o.level)) pts.push_back(ifs::PointRef::special(x));
        pts.push_back(ifs::PointRef::generic());
    }
    json arr = json::array();
    for (const auto& p : pts) {
        auto dec = fiber::fiber_decomposition(spec, p, o.level);
        if (o.format == "json") {
            json j = report::fiber_json(dec);
            if (o.matrices) {
                auto fm = fiber::build_fiber_matrices(spec, dec, effective_guard(o));
                j["q"] = report::matrix_json(fm.q);
                json zs = json::array();
                for (const auto& z : fm.central) zs.push_back(report::matrix_json(z));
                j["central"] = std::move(zs);
            }
            arr.push_back(std::move(j));
            continue;
        }
        out << "fiber at " << p.display() << ", level " << o.level << ": " << block_sum(dec) << "\n";
        for (const auto& b : dec.blocks)
            out << "  " << b.tag() << "  size " << b.algebra_size << "  weight " << b.weight << "\n";
        if (o.matrices) {
            auto fm = fiber::build_fiber_matrices(spec, dec, effective_guard(o));
            out << "Q =\n" << report::render_matrix(fm.q, o.approx);
            for (size_t i = 0; i < fm.central.size(); ++i)
                out << "z[" << dec.blocks[i + 1].tag() << "] =\n"
                    << report::render_matrix(fm.central[i], o.approx);
        }
    }
    if (o.format == "json") out << report::envelope(spec, json{{"fibers", std::move(arr)}}).dump(2) << "\n";
    return 0;
}

json k0_json(const ifs::MapSpec& spec, const dimension::K0Presentation& p) {
    json blocks = json::array();
    for (int c = 0; c < p.ambient_dim(); ++c) {
        const auto& b = p.block(c);
        blocks.push_back({{"point", p.singular[size_t(p.ambient[size_t(c)].first)]},
                          {"tag", b.tag()},
                          {"size", b.algebra_size},
                          {"weight", b.weight}});
    }
    json j{{"level", p.n}, {"rank", p.lattice.rank()}, {"trivial", p.trivial},
           {"ambient_blocks", std::move(blocks)}, {"basis", report::matrix_json(p.lattice.basis)}};
    if (auto nb = dimension::paper_basis(spec, p)) {
        j["paper_basis"] = report::matrix_json(nb->rows);
        j["paper_basis_names"] = nb->names;
    }
    return j;
}

int cmd_k0(const Options& o, std::ostream& out, std::ostream&) {
    auto loaded = ifs::load_spec(o.source);
    const auto& spec = *loaded.spec;
    auto p = dimension::k0_finite(spec, o.level);
    if (o.format == "json") {
        out << report::envelope(spec, k0_json(spec, p)).dump(2) << "\n";
        return 0;
    }
    out << "K0 of the level-" << o.level << " core: rank " << p.lattice.rank() << "\n";
    if (p.trivial) {
        out << "no singular points; single common-rank coordinate Z\n";
        return 0;
    }
    out << "ambient blocks:\n";
    for (int c = 0; c < p.ambient_dim(); ++c)
        out << "  [" << c << "] " << p.singular[size_t(p.ambient[size_t(c)].first)] << " : "
            << p.block(c).tag() << " size " << p.block(c).algebra_size << " weight "
            << p.block(c).weight << "\n";
    out << "lattice basis (rows):\n" << report::render_matrix(p.lattice.basis);
    if (auto nb = dimension::paper_basis(spec, p)) {
        out << "printed basis rows (";
        for (size_t i = 0; i < nb->names.size(); ++i) out << (i ? " " : "") << nb->names[i];
        out << "):\n" << report::render_matrix(nb->rows);
    }
    return 0;
}

int cmd_map(const Options& o, std::ostream& out, std::ostream&, bool beta) {
    auto loaded = ifs::load_spec(o.source);
    const auto& spec = *loaded.spec;
    auto lm = beta ? dimension::beta_matrix(spec, o.level, effective_guard(o))
                   : dimension::inclusion_matrix(spec, o.level, effective_guard(o));
    const char* label = beta ? "beta" : "inclusion";
    if (o.format == "json") {
        json j{{"level", o.level},
               {beta ? "beta" : "inclusion", report::matrix_json(lm.canonical)},
               {"raw_images", report::matrix_json(lm.raw_images)},
               {"injective", lm.injective}};
        if (lm.paper) j["paper_basis_matrix"] = report::matrix_json(*lm.paper);
        out << report::envelope(spec, std::move(j)).dump(2) << "\n";
        return 0;
    }
    out << label << " map K0(level " << o.level << ") -> K0(level " << o.level + 1
        << "), canonical bases:\n"
        << report::render_matrix(lm.canonical);
    out << "injective: " << (lm.injective ? "yes" : "no") << "\n";
    if (lm.paper) out << "printed bases:\n" << report::render_matrix(*lm.paper);
    return 0;
}

int cmd_traces(const Options& o, std::ostream& out, std::ostream&) {
    auto loaded = ifs::load_spec(o.source);
    const auto& spec = *loaded.spec;
    auto t = dimension::trace_pairing(spec, o.level, o.r_max, effective_guard(o), o.paper);
    if (o.format == "json") {
        json j{{"level", o.level}, {"r_max", o.r_max}, {"rows", t.row_names},
               {"columns", t.column_names}, {"traces", report::matrix_json(t.values)}};
        out << report::envelope(spec, std::move(j)).dump(2) << "\n";
        return 0;
    }
    out << "trace pairing at level " << o.level << " (columns:";
    for (const auto& c : t.column_names) out << " " << c;
    out << ")\n";
    for (int i = 0; i < t.values.rows(); ++i) {
        out << "  " << t.row_names[size_t(i)] << " :";
        for (int j = 0; j < t.values.cols(); ++j) {
            out << " " << exact::to_string(t.values.at(i, j));
            if (o.approx && !exact::is_integer(t.values.at(i, j)))
                out << " (" << t.values.at(i, j).get_d() << ")";
        }
        out << "\n";
    }
    return 0;
}

int cmd_limit(const Options& o, std::ostream& out, std::ostream&) {
    auto loaded = ifs::load_spec(o.source);
    const auto& spec = *loaded.spec;
    auto rep = dimension::limit_report(spec, o.max_level, o.r_max, effective_guard(o));
    if (o.format == "json") {
        json levels = json::array();
        for (int n = 0; n <= rep.n_max; ++n) {
            auto p = dimension::k0_finite(spec, n);
            json j = k0_json(spec, p);
            j["traces"] = report::matrix_json(rep.level_traces[size_t(n)]);
            if (n < rep.n_max) {
                j["inclusion"] = report::matrix_json(rep.inclusions[size_t(n)].canonical);
                j["beta"] = report::matrix_json(rep.betas[size_t(n)].canonical);
                if (rep.inclusions[size_t(n)].paper)
                    j["paper_basis_inclusion"] = report::matrix_json(*rep.inclusions[size_t(n)].paper);
                if (rep.betas[size_t(n)].paper)
                    j["paper_basis_beta"] = report::matrix_json(*rep.betas[size_t(n)].paper);
            }
            levels.push_back(std::move(j));
        }
        json j{{"levels", std::move(levels)},
               {"ranks", rep.ranks},
               {"inclusions_injective", rep.inclusions_injective},
               {"traces_invariant", rep.traces_invariant},
               {"phi_independent", rep.phi_independent},
               {"phi_in_c_span", rep.phi_in_c_span},
               {"c_vectors", report::matrix_json(rep.c_vectors)},
               {"two_x_solvable", rep.two_x_solvable},
               {"k1", json{{"known", rep.k1.known},
                           {"statement", rep.k1.statement},
                           {"citation", rep.k1.citation}}}};
        if (!rep.trace_note.empty()) j["trace_note"] = rep.trace_note;
        out << report::envelope(spec, std::move(j)).dump(2) << "\n";
        return 0;
    }
    out << "levels 0.." << rep.n_max << ", ranks:";
    for (int r : rep.ranks) out << " " << r;
    out << "\n";
    for (int n = 0; n < rep.n_max; ++n) {
        out << "inclusion " << n << "->" << n + 1 << " ("
            << (rep.inclusions[size_t(n)].injective ? "injective" : "NOT injective") << "):\n"
            << report::render_matrix(rep.inclusions[size_t(n)].canonical);
        if (rep.inclusions[size_t(n)].paper)
            out << "printed bases:\n" << report::render_matrix(*rep.inclusions[size_t(n)].paper);
        out << "beta " << n << "->" << n + 1 << ":\n"
            << report::render_matrix(rep.betas[size_t(n)].canonical);
    }
    out << "traces invariant under inclusions: " << (rep.traces_invariant ? "yes" : "no");
    if (!rep.trace_note.empty()) out << "  (" << rep.trace_note << ")";
    out << "\n";
    out << "phi images independent per level:";
    for (bool b : rep.phi_independent) out << " " << (b ? "yes" : "no");
    out << "\nphi images in the integer span of the c-generators per level:";
    for (bool b : rep.phi_in_c_span) out << " " << (b ? "yes" : "no");
    out << "\nc-generators (rows c_0..c_" << rep.n_max << "):\n"
        << report::render_matrix(rep.c_vectors, o.approx);
    out << "2x = c1 solvable per stage 1.." << rep.n_max << ":";
    for (bool b : rep.two_x_solvable) out << " " << (b ? "yes" : "no");
    out << "\n";
    if (rep.k1.known)
        out << "K1 (cited): " << rep.k1.statement << " [" << rep.k1.citation << "]\n";
    else
        out << "K1: unknown for user-supplied specs\n";
    return 0;
}

} // namespace

RunResult run(const std::vector<std::string>& args) {
    RunResult res;
    std::ostringstream out, err;

    CLI::App app{"exact core / K0 computations for branched self-similar maps"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool with_level) {
        sub->add_option("spec", o.source, "builtin name (tent, gasket, fullshift2) or spec file")
            ->required();
        if (with_level)
            sub->add_option("-n,--level", o.level, "core level n")->check(CLI::NonNegativeNumber);
        sub->add_option("--format", o.format, "text | json | dot")
            ->check(CLI::IsMember({"text", "json", "dot"}));
        sub->add_option("--size-guard", o.size_guard, "max matrix dimension (default 4096)");
        sub->add_flag("--approx", o.approx, "add decimal renderings next to exact values");
    };

    add_common(app.add_subcommand("validate", "check a map spec and print derived sets"), false);
    auto* orb = app.add_subcommand("orbits", "enumerate p-q orbit families");
    add_common(orb, false);
    orb->add_option("--point", o.point, "orbit start point")->required();
    orb->add_option("--depth", o.depth, "maximum p")->check(CLI::NonNegativeNumber);
    orb->add_option("--q", o.q, "free continuation length")->check(CLI::NonNegativeNumber);
    add_common(app.add_subcommand("branch-sets", "level-n branch data"), true);
    auto* fib = app.add_subcommand("fibers", "fiber decompositions of the level-n core");
    add_common(fib, true);
    fib->add_option("--point", o.point, "single point (label or 'generic')");
    fib->add_flag("--matrices", o.matrices, "emit Q and the central projections");
    add_common(app.add_subcommand("k0", "K0 presentation of the level-n core"), true);
    add_common(app.add_subcommand("embed", "inclusion matrix K0(n) -> K0(n+1)"), true);
    auto* tr = app.add_subcommand("traces", "trace pairing on the K0 basis");
    add_common(tr, true);
    tr->add_option("--rmax", o.r_max, "largest trace index")->check(CLI::NonNegativeNumber);
    tr->add_flag("--paper", o.paper, "use the printed basis (built-ins)");
    add_common(app.add_subcommand("beta", "canonical endomorphism K0(n) -> K0(n+1)"), true);
    auto* lim = app.add_subcommand("limit", "inductive limit report");
    add_common(lim, false);
    lim->add_option("--max", o.max_level, "largest level")->check(CLI::NonNegativeNumber);
    lim->add_option("--rmax", o.r_max, "largest trace index")->check(CLI::NonNegativeNumber);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        res.out = out.str();
        res.err = err.str();
        res.exit_code = (code == 0) ? 0 : 2;
        return res;
    }

    o.command = app.get_subcommands().front()->get_name();
    try {
        // commands that need a valid spec reject bad input with exit 1
        if (o.command != "validate") {
            auto loaded = ifs::load_spec(o.source);
            if (!loaded.ok()) {
                for (const auto& d : loaded.diagnostics) err << d.code << ": " << d.message << "\n";
                res.out = out.str();
                res.err = err.str();
                res.exit_code = 1;
                return res;
            }
        }
        if (o.format == "dot" && o.command != "orbits")
            fail("UsageError", "--format dot is only valid for orbits");
        int code = 0;
        if (o.command == "validate") code = cmd_validate(o, out, err);
        else if (o.command == "orbits") code = cmd_orbits(o, out, err);
        else if (o.command == "branch-sets") code = cmd_branch_sets(o, out, err);
        else if (o.command == "fibers") code = cmd_fibers(o, out, err);
        else if (o.command == "k0") code = cmd_k0(o, out, err);
        else if (o.command == "embed") code = cmd_map(o, out, err, false);
        else if (o.command == "beta") code = cmd_map(o, out, err, true);
        else if (o.command == "traces") code = cmd_traces(o, out, err);
        else if (o.command == "limit") code = cmd_limit(o, out, err);
        res.exit_code = code;
    } catch (const Error& e) {
        err << e.what() << "\n";
        res.exit_code = (e.code() == "UsageError") ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        res.exit_code = 1;
    }
    res.out = out.str();
    res.err = err.str();
    return res;
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    RunResult r = run(args);
    std::cout << r.out;
    std::cerr << r.err;
    return r.exit_code;
}

} // namespace selfsim::cli
