#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include <CLI11.hpp>

#include "sparsify/algconn.hpp"
#include "sparsify/errors.hpp"
#include "sparsify/graph_io.hpp"
#include "sparsify/patch.hpp"
#include "sparsify/ultra.hpp"

namespace sparsify::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Input {
    WeightedGraph graph;
    Report info;
};

Input load(const std::string& path) {
    const std::string bytes = io::read_file(path);
    Input in;
    try {
        in.graph = io::parse_graph(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
    in.info = {{"path", path},
               {"fnv1a", io::hex_digest(bytes)},
               {"vertices", in.graph.num_vertices()},
               {"edges", in.graph.num_edges()}};
    return in;
}

// JSON has no infinity; unbounded values are written as null.
Report real(double x) { return std::isfinite(x) ? Report(x) : Report(nullptr); }

Report check(double value, double bound, bool holds) {
    return {{"value", real(value)}, {"bound", real(bound)}, {"holds", holds}};
}

bool close(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

Report trace_json(const std::vector<StepTrace>& trace) {
    Report rows = Report::array();
    for (const auto& s : trace) {
        rows.push_back({{"step", s.step},
                        {"index", s.index},
                        {"t", s.t},
                        {"l", s.l},
                        {"u", s.u},
                        {"upper_before", s.upper_before},
                        {"lower_before", s.lower_before},
                        {"upper_after", s.upper_after},
                        {"lower_after", s.lower_after},
                        {"total_cost", s.total_cost}});
    }
    return rows;
}

void write_trace_csv(const std::string& path, const std::vector<std::pair<int, const std::vector<StepTrace>*>>& parts) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot write " + path);
    out.precision(17);
    out << "component,step,index,t,l,u,upper_before,lower_before,upper_after,lower_after,total_cost\n";
    for (const auto& [component, trace] : parts) {
        for (const auto& s : *trace) {
            out << component << ',' << s.step << ',' << s.index << ',' << s.t << ',' << s.l << ',' << s.u << ','
                << s.upper_before << ',' << s.lower_before << ',' << s.upper_after << ',' << s.lower_after << ','
                << s.total_cost << '\n';
        }
    }
}

Report range_json(const PencilRange& r) {
    return {{"lower", real(r.lower)}, {"upper", real(r.upper)}, {"condition_number", real(r.condition_number())}};
}

Report command_echo(const std::string& name, Report flags) { return {{"name", name}, {"flags", std::move(flags)}}; }

}  // namespace

Report cmd_patch(const PatchArgs& args) {
    const auto start = Clock::now();
    const Input g = load(args.g_path);
    const Input w = load(args.w_path);
    const int budget = args.budget > 0 ? args.budget : default_patch_budget(args.k);

    const auto solve_start = Clock::now();
    const PatchSparsifier ps = sparsify_patch(g.graph, w.graph, args.k, budget);
    const double solve_seconds = seconds_since(solve_start);
    io::write_graph(args.out_path, ps.wk);

    // Everything below is recomputed from the written file.
    const WeightedGraph wk = io::read_graph(args.out_path);
    const WeightedGraph gw = g.graph + w.graph;
    const PencilRange measured = range_of(pencil_eigenvalues_on_image(laplacian(g.graph + wk), laplacian(gw)));
    bool subset = true;
    for (const auto& e : wk.edges()) subset = subset && w.graph.has_edge(e.u, e.v);
    int edge_budget = 0;
    for (const auto& c : ps.components) edge_budget += c.budget;
    if (ps.components.empty()) edge_budget = 0;

    Report components = Report::array();
    std::vector<std::pair<int, const std::vector<StepTrace>*>> traces;
    for (std::size_t i = 0; i < ps.components.size(); ++i) {
        const auto& c = ps.components[i];
        components.push_back({{"vertices", c.vertices.size()},
                              {"k", c.k},
                              {"budget", c.budget},
                              {"trace_bound", c.trace_bound},
                              {"lambda_star", c.lambda_star},
                              {"certified_lower", c.certified_lower},
                              {"analytic_lower", c.analytic_lower},
                              {"theta_max", c.theta_max},
                              {"w_total", c.w_total},
                              {"wk_total", c.wk_total},
                              {"support", c.support},
                              {"monotonicity_violations", c.monotonicity_violations},
                              {"trace", trace_json(c.trace)}});
        traces.emplace_back(static_cast<int>(i), &c.trace);
    }
    write_trace_csv(args.trace_csv, traces);

    Report r;
    r["command"] = command_echo("patch", {{"k", args.k}, {"n_budget", budget}, {"out", args.out_path}});
    r["inputs"] = {{"g", g.info}, {"w", w.info}};
    r["result"] = {{"wk_edges", wk.num_edges()},
                   {"wk_total_weight", wk.total_weight()},
                   {"w_total_weight", w.graph.total_weight()},
                   {"weight_budget", ps.weight_budget},
                   {"certified", {{"lower", ps.certified_lower}, {"upper", ps.certified_upper}}},
                   {"analytic_lower", ps.analytic_lower},
                   {"measured", range_json(measured)},
                   {"components", components}};
    r["checks"] = {
        {"output_coherent", check(measured.lower, ps.measured_lower,
                                  close(measured.lower, ps.measured_lower) && close(measured.upper, ps.measured_upper) &&
                                      wk == ps.wk)},
        {"wk_subset_of_w", check(static_cast<double>(wk.num_edges()), static_cast<double>(w.graph.num_edges()), subset)},
        {"edge_budget", check(static_cast<double>(wk.num_edges()), edge_budget,
                              static_cast<int>(wk.num_edges()) <= edge_budget)},
        {"lower", check(measured.lower, ps.certified_lower, measured.lower >= ps.certified_lower - 1e-9)},
        {"upper", check(measured.upper, ps.certified_upper, measured.upper <= ps.certified_upper + 1e-9)},
        {"weight_budget", check(wk.total_weight(), ps.weight_budget,
                                wk.total_weight() <= ps.weight_budget * (1 + 1e-9) + 1e-12)}};
    r["timings"] = {{"solve_seconds", solve_seconds}, {"total_seconds", seconds_since(start)}};
    return r;
}

Report cmd_ultra(const UltraArgs& args) {
    const auto start = Clock::now();
    const Input g = load(args.g_path);
    UltraOptions opts;
    opts.k = args.k;
    opts.c1 = args.c1;
    opts.c3 = args.c3;
    opts.seed = args.seed;

    const auto solve_start = Clock::now();
    const UltraResult u = build_ultrasparsifier(g.graph, opts);
    const double solve_seconds = seconds_since(solve_start);
    io::write_graph(args.out_path, u.u);

    const WeightedGraph written = io::read_graph(args.out_path);
    const PencilRange measured = pencil_range(laplacian(g.graph), laplacian(written));
    const int n = g.graph.num_vertices();
    const int edge_limit = n - 1 + u.budget;

    Report tail = Report::array();
    for (const auto& t : u.stretch.tail) {
        tail.push_back({{"threshold", t.threshold}, {"count", t.count}, {"bound", t.bound}});
    }
    Report components = Report::array();
    std::vector<std::pair<int, const std::vector<StepTrace>*>> traces;
    for (std::size_t i = 0; i < u.patch.components.size(); ++i) {
        const auto& c = u.patch.components[i];
        components.push_back({{"k", c.k},
                              {"budget", c.budget},
                              {"trace_bound", c.trace_bound},
                              {"lambda_star", c.lambda_star},
                              {"support", c.support},
                              {"monotonicity_violations", c.monotonicity_violations},
                              {"trace", trace_json(c.trace)}});
        traces.emplace_back(static_cast<int>(i), &c.trace);
    }
    write_trace_csv(args.trace_csv, traces);

    const double patch_trace_limit = args.k / (args.c1 * args.c3);
    Report r;
    r["command"] = command_echo("ultra", {{"k", args.k}, {"c1", args.c1}, {"c3", args.c3}, {"seed", args.seed},
                                          {"out", args.out_path}});
    r["inputs"] = {{"g", g.info}};
    r["result"] = {
        {"tree_input", u.tree_input},
        {"stretch", {{"total", u.stretch.stretch}, {"trace", u.stretch.trace}, {"residual", u.stretch.residual},
                     {"tail", tail}}},
        {"kappa_target", u.kappa_target},
        {"budget", u.budget},
        {"u_edges", written.num_edges()},
        {"patch", {{"k", u.patch_params.k},
                   {"lambda_star", u.patch_params.lambda_star},
                   {"trace", u.patch_params.trace_bound},
                   {"certified_lower", u.patch.certified_lower},
                   {"certified_upper", u.patch.certified_upper},
                   {"measured_lower", u.patch.measured_lower},
                   {"measured_upper", u.patch.measured_upper},
                   {"components", components}}},
        {"certified", {{"lower", u.certified_lower}, {"upper", u.certified_upper}}},
        // c·L_U ⪯ L_G ⪯ κ·L_U
        {"measured", {{"c", measured.lower}, {"kappa", measured.upper},
                      {"condition_number", measured.condition_number()}}},
        {"within_kappa_target", measured.upper <= u.kappa_target * (1 + 1e-9)}};

    Report checks = {
        {"output_coherent", check(measured.upper, u.measured.upper,
                                  close(measured.lower, u.measured.lower, 1e-7) &&
                                      close(measured.upper, u.measured.upper, 1e-7) && written == u.u)},
        {"edge_count", check(static_cast<double>(written.num_edges()), edge_limit,
                             static_cast<int>(written.num_edges()) <= edge_limit)},
        {"lower", check(measured.lower, u.certified_lower, measured.lower >= u.certified_lower - 1e-9)},
        {"upper", check(measured.upper, u.certified_upper, measured.upper <= u.certified_upper * (1 + 1e-9))},
        {"trace_identity", check(u.stretch.residual, 1e-7 * u.stretch.stretch,
                                 u.stretch.residual <= 1e-7 * u.stretch.stretch)},
        {"eigenvalue_tail", check(0, 0, u.stretch.tail_ok)}};
    if (!u.tree_input) {
        checks["patch_lambda_star"] =
            check(u.patch_params.lambda_star, 0.8, u.patch_params.lambda_star >= 0.8 - 1e-6);
        checks["patch_trace"] =
            check(u.patch_params.trace_bound, patch_trace_limit, u.patch_params.trace_bound <= patch_trace_limit + 1e-6);
    }
    r["checks"] = checks;
    r["timings"] = {{"solve_seconds", solve_seconds}, {"total_seconds", seconds_since(start)}};
    return r;
}

Report cmd_algconn(const AlgconnArgs& args) {
    const auto start = Clock::now();
    const Input base = load(args.base_path);
    const Input cand = load(args.cand_path);
    const ConnectivityInstance inst = ConnectivityInstance::make(base.graph, cand.graph, args.k);

    const auto solve_start = Clock::now();
    const FractionalSolution frac = solve_fractional(inst, args.tol);
    const double fractional_seconds = seconds_since(solve_start);
    const auto round_start = Clock::now();
    const RoundedSolution rs = round_solution(inst, frac);
    const double rounding_seconds = seconds_since(round_start);

    std::vector<Edge> chosen;
    for (std::size_t i = 0; i < rs.selected.size(); ++i) {
        chosen.push_back({rs.selected[i].u, rs.selected[i].v, rs.rounded_weights[i]});
    }
    io::write_graph(args.out_path, WeightedGraph(base.graph.num_vertices(), chosen));

    const WeightedGraph written = io::read_graph(args.out_path);
    const double achieved = eigenvalues(laplacian(base.graph + written))(1);
    std::vector<Edge> unit = written.edges();
    for (auto& e : unit) e.w = 1.0;
    const double achieved_unweighted = eigenvalues(laplacian(base.graph + WeightedGraph(written.num_vertices(), unit)))(1);
    double max_weight = 0.0;
    bool subset = true;
    for (const auto& e : written.edges()) {
        max_weight = std::max(max_weight, e.w);
        subset = subset && cand.graph.has_edge(e.u, e.v);
    }

    Report selected = Report::array();
    for (const auto& e : written.edges()) selected.push_back({e.u, e.v, e.w});
    Report r;
    r["command"] = command_echo("algconn", {{"k", args.k}, {"tol", args.tol}, {"oracle", args.oracle},
                                            {"out", args.out_path}});
    r["inputs"] = {{"base", base.info}, {"candidates", cand.info}};
    r["result"] = {{"delta", inst.delta},
                   {"fractional", {{"lambda_sdp", frac.lambda_sdp},
                                   {"dual_bound", frac.dual_bound},
                                   {"weight_sum", std::accumulate(frac.weights.begin(), frac.weights.end(), 0.0)},
                                   {"iterations", frac.iterations},
                                   {"gradient_norm", frac.gradient_norm},
                                   {"converged", frac.converged}}},
                   {"lambda_k2", real(rs.lambda_k2)},
                   {"budget", rs.budget},
                   {"selected", selected},
                   {"lambda_weighted", achieved},
                   {"lambda_unweighted", achieved_unweighted},
                   {"guaranteed_floor", rs.guaranteed_floor},
                   {"weight_ceiling", rs.weight_ceiling},
                   {"monotonicity_violations", rs.monotonicity_violations},
                   {"trace", trace_json(rs.trace)}};
    write_trace_csv(args.trace_csv, {{0, &rs.trace}});

    Report checks = {
        {"output_coherent", check(achieved, rs.lambda_weighted,
                                  close(achieved, rs.lambda_weighted, 1e-9) &&
                                      close(achieved_unweighted, rs.lambda_unweighted, 1e-9))},
        {"selected_subset_of_candidates", check(written.num_edges(), cand.graph.num_edges(), subset)},
        {"floor", check(achieved, rs.guaranteed_floor, achieved >= rs.guaranteed_floor - 1e-9)},
        {"support", check(written.num_edges(), 8.0 * args.k + 1, static_cast<int>(written.num_edges()) <= 8 * args.k + 1)},
        {"weight_ceiling", check(max_weight, rs.weight_ceiling,
                                 written.num_edges() == 0 || max_weight <= rs.weight_ceiling * (1 + 1e-9))}};
    double oracle_seconds = 0.0;
    if (args.oracle) {
        const auto oracle_start = Clock::now();
        const BruteForceResult opt = brute_force_opt(inst);
        oracle_seconds = seconds_since(oracle_start);
        Report edges = Report::array();
        for (const auto& e : opt.edges) edges.push_back({e.u, e.v});
        r["result"]["oracle"] = {{"lambda2", opt.lambda2}, {"edges", edges}, {"evaluated", opt.evaluated}};
        checks["oracle_below_sdp"] = check(opt.lambda2, frac.lambda_sdp + args.tol * 10,
                                           opt.lambda2 <= frac.lambda_sdp + args.tol * 10);
        checks["oracle_below_lambda_k2"] =
            check(opt.lambda2, rs.lambda_k2, opt.lambda2 <= rs.lambda_k2 + 1e-9);
    }
    r["checks"] = checks;
    r["timings"] = {{"fractional_seconds", fractional_seconds},
                    {"rounding_seconds", rounding_seconds},
                    {"oracle_seconds", oracle_seconds},
                    {"total_seconds", seconds_since(start)}};
    return r;
}

Report cmd_verify(const VerifyArgs& args) {
    const auto start = Clock::now();
    const Input g = load(args.g_path);
    const Input h = load(args.h_path);
    if (g.graph.num_vertices() != h.graph.num_vertices()) {
        throw IncompatibleKernels("verify: graphs have different vertex counts");
    }
    const auto cg = g.graph.components();
    const auto ch = h.graph.components();
    if (cg.label != ch.label) throw IncompatibleKernels("verify: graphs have different connected components");

    const Matrix lg = laplacian(g.graph);
    const Matrix lh = laplacian(h.graph);
    const PencilRange h_over_g = pencil_range(lh, lg);
    const PencilRange g_over_h = pencil_range(lg, lh);
    Report r;
    r["command"] = command_echo("verify", Report::object());
    r["inputs"] = {{"g", g.info}, {"h", h.info}};
    r["result"] = {// c·L_G ⪯ L_H ⪯ κ·L_G
                   {"c", real(h_over_g.lower)},
                   {"kappa", real(h_over_g.upper)},
                   {"h_over_g", range_json(h_over_g)},
                   {"g_over_h", range_json(g_over_h)}};
    r["checks"] = Report::object();
    r["timings"] = {{"total_seconds", seconds_since(start)}};
    return r;
}

Report strip_timings(Report report) {
    report.erase("timings");
    return report;
}

namespace {

int exit_code_for_checks(const Report& report, std::ostream& err) {
    int code = 0;
    for (const auto& [name, c] : report["checks"].items()) {
        if (!c["holds"].get<bool>()) {
            err << "error: check '" << name << "' failed\n";
            code = 4;
        }
    }
    return code;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral sparsification by two-barrier rank-one updates"};
    app.require_subcommand(1);
    std::string report_path;
    app.add_option("--report", report_path, "Write the JSON report here instead of stdout");

    PatchArgs patch;
    auto* p = app.add_subcommand("patch", "Sparsify a patch W against a base graph G");
    p->add_option("g", patch.g_path, "Base graph")->required();
    p->add_option("w", patch.w_path, "Patch graph")->required();
    p->add_option("--k", patch.k, "Number of protected low eigendirections")->capture_default_str()->check(CLI::NonNegativeNumber);
    p->add_option("--n-budget", patch.budget, "Edge budget N (default 8k+1)");
    p->add_option("--out", patch.out_path, "Output W_k")->required();
    p->add_option("--trace-csv", patch.trace_csv, "Per-step barrier trace");
    p->add_option("--report", report_path);

    UltraArgs ultra;
    auto* u = app.add_subcommand("ultra", "Build an ultrasparsifier: tree plus O(k) edges");
    u->add_option("g", ultra.g_path, "Input graph")->required();
    u->add_option("--k", ultra.k, "Off-tree edge scale")->capture_default_str();
    u->add_option("--c1", ultra.c1, "kappa = c1 st_T(G)/k")->capture_default_str();
    u->add_option("--c3", ultra.c3, "Patch is G scaled by 1/(c3 kappa)")->capture_default_str();
    u->add_option("--seed", ultra.seed, "Tree candidate roots")->capture_default_str();
    u->add_option("--out", ultra.out_path, "Output U")->required();
    u->add_option("--trace-csv", ultra.trace_csv, "Per-step barrier trace");
    u->add_option("--report", report_path);

    AlgconnArgs alg;
    auto* a = app.add_subcommand("algconn", "Add at most k candidate edges to raise algebraic connectivity");
    a->add_option("base", alg.base_path, "Base graph")->required();
    a->add_option("candidates", alg.cand_path, "Candidate edges (weights ignored)")->required();
    a->add_option("--k", alg.k, "Edges to add")->capture_default_str()->check(CLI::NonNegativeNumber);
    a->add_option("--tol", alg.tol, "Duality gap for the fractional solve")->capture_default_str();
    a->add_flag("--oracle", alg.oracle, "Also run the exhaustive oracle");
    a->add_option("--out", alg.out_path, "Output selected edges")->required();
    a->add_option("--trace-csv", alg.trace_csv, "Per-step barrier trace");
    a->add_option("--report", report_path);

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Relative spectrum of H against G");
    v->add_option("graph", verify.g_path, "Reference graph G")->required();
    v->add_option("other", verify.h_path, "Graph H compared against G")->required();
    v->add_option("--report", report_path);

    std::vector<std::string> args(argv.rbegin(), argv.rend() - 1);
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        Report report;
        if (p->parsed()) report = cmd_patch(patch);
        if (u->parsed()) report = cmd_ultra(ultra);
        if (a->parsed()) report = cmd_algconn(alg);
        if (v->parsed()) report = cmd_verify(verify);
        const std::string text = report.dump(2) + "\n";
        if (report_path.empty()) {
            out << text;
        } else {
            std::ofstream file(report_path);
            if (!file) throw PreconditionError("cannot write " + report_path);
            file << text;
        }
        return exit_code_for_checks(report, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace sparsify::cli
