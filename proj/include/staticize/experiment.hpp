#pragma once

#include "io.hpp"
#include "lemma_checks.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "protocols.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace staticize {

enum class Mode { Plan, VerifyLemma, Staticize, Protocol, Sweep };

inline Mode parse_mode(const std::string& s) {
    if (s == "plan") return Mode::Plan;
    if (s == "verify-lemma" || s == "verify") return Mode::VerifyLemma;
    if (s == "staticize") return Mode::Staticize;
    if (s == "protocol") return Mode::Protocol;
    if (s == "sweep") return Mode::Sweep;
    io::schema_error("config.mode", "unknown mode '" + s + "' (plan, verify-lemma, staticize, protocol, sweep)");
}

inline std::string mode_name(Mode m) {
    switch (m) {
    case Mode::Plan: return "plan";
    case Mode::VerifyLemma: return "verify-lemma";
    case Mode::Staticize: return "staticize";
    case Mode::Protocol: return "protocol";
    case Mode::Sweep: return "sweep";
    }
    return "";
}

struct ExperimentConfig {
    Mode mode = Mode::Plan;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    io::json body; // the full config document

    // `expected` comes from the CLI subcommand; a config may then omit "mode"
    // but must not contradict it.
    static ExperimentConfig from_json(const io::json& j, std::optional<Mode> expected = std::nullopt) {
        if (!j.is_object()) io::schema_error("config", "expected an object");
        ExperimentConfig c;
        c.body = j;
        const int v = io::get_or<int>(j, "schema_version", io::schema_version, "config");
        if (v != io::schema_version)
            io::schema_error("config.schema_version", "unsupported version " + std::to_string(v));
        if (j.contains("mode")) {
            c.mode = parse_mode(io::get<std::string>(j, "mode", "config"));
            if (expected && *expected != c.mode)
                io::schema_error("config.mode", "'" + mode_name(c.mode) + "' does not match subcommand '" + mode_name(*expected) + "'");
        } else if (expected) {
            c.mode = *expected;
        } else {
            io::schema_error("config.mode", "missing field");
        }
        c.seed = io::get_or<std::uint64_t>(j, "seed", 1, "config");
        c.out_dir = io::get_or<std::string>(j, "out", "out", "config");
        return c;
    }
};

enum ExitStatus { ok = 0, bound_violation = 1, config_error = 2, resource_cap = 3 };

struct RunResult {
    int status = ok;
    io::json record;
    std::vector<std::string> files;
    std::string message;
};

namespace detail {

inline io::json budget_json(const ErrorBudget& b) {
    io::json j{{"trotter_term", b.trotter_term},
               {"controlled_term", b.controlled_term},
               {"translation_term", b.translation_term},
               {"wraparound_term", b.wraparound_term},
               {"total", std::isfinite(b.total) ? io::json(b.total) : io::json(nullptr)},
               {"in_window", b.in_window}};
    if (b.smoothing_term) j["smoothing_term"] = *b.smoothing_term;
    if (b.measured) j["measured"] = *b.measured;
    return j;
}

inline io::json ancilla_json(const AncillaReport& r) {
    io::json j{{"context", r.context}, {"N_c", r.N_c}, {"qubits_per_site", r.qubits_per_site}, {"scaling", r.scaling}};
    if (!r.scaling_bump.empty()) j["scaling_bump"] = r.scaling_bump;
    if (r.z_c) j["z_c"] = *r.z_c;
    if (r.reference_value && std::isfinite(*r.reference_value)) j["reference_value"] = *r.reference_value;
    return j;
}

inline Vec parse_state(const io::json& body, int n, const std::string& path) {
    const Index dim = Index{1} << n;
    Vec psi = Vec::Zero(dim);
    if (!body.contains("state")) {
        psi(0) = 1.0;
        return psi;
    }
    const io::json& s = body.at("state");
    const std::string sp = path + ".state";
    if (s.contains("basis")) {
        const auto k = io::get<Index>(s, "basis", sp);
        if (k < 0 || k >= dim) io::schema_error(sp + ".basis", "out of range");
        psi(k) = 1.0;
        return psi;
    }
    const io::json& a = io::field(s, "amplitudes", sp);
    if (!a.is_array() || static_cast<Index>(a.size()) != dim)
        io::schema_error(sp + ".amplitudes", "expected " + std::to_string(dim) + " entries");
    for (Index i = 0; i < dim; ++i) {
        const io::json& e = a[i];
        if (e.is_number())
            psi(i) = e.get<double>();
        else if (e.is_array() && e.size() == 2)
            psi(i) = cplx(e[0].get<double>(), e[1].get<double>());
        else
            io::schema_error(sp + ".amplitudes[" + std::to_string(i) + "]", "entry must be a number or [re, im]");
    }
    if (psi.norm() == 0.0) io::schema_error(sp + ".amplitudes", "zero vector");
    return psi.normalized();
}

inline cplx parse_complex(const io::json& j, const std::string& key, cplx fallback, const std::string& path) {
    if (!j.contains(key)) return fallback;
    const io::json& e = j.at(key);
    if (e.is_number()) return e.get<double>();
    if (e.is_array() && e.size() == 2) return {e[0].get<double>(), e[1].get<double>()};
    io::schema_error(path + "." + key, "expected a number or [re, im]");
}

inline TimeDepHamiltonian load_hamiltonian(const io::json& body, const std::string& path) {
    if (body.contains("hamiltonian")) return io::parse_hamiltonian(body.at("hamiltonian"), path + ".hamiltonian");
    if (body.contains("hamiltonian_file"))
        return io::parse_hamiltonian(io::read_json(io::get<std::string>(body, "hamiltonian_file", path)),
                                     path + ".hamiltonian_file");
    io::schema_error(path, "one of 'hamiltonian' or 'hamiltonian_file' is required");
}

inline void emit(RunResult& r, const std::string& dir, const std::string& name, const std::string& text) {
    const std::string p = (std::filesystem::path(dir) / name).string();
    io::write_text(p, text);
    r.files.push_back(p);
}

// ---- modes ------------------------------------------------------------------

inline RunResult run_plan(const ExperimentConfig& c) {
    const io::json& b = c.body;
    const std::string P = "config";
    const double h = io::get<double>(b, "h", P), h1 = io::get<double>(b, "h1", P), T = io::get<double>(b, "T", P),
                 eps = io::get<double>(b, "eps", P);
    const int N = io::get<int>(b, "N", P);
    const PlanResult plan = plan_parameters(h, h1, T, N, eps);
    const ErrorBudget budget = theorem_bound(h, h1, plan.params, N);
    RunResult r;
    io::json& j = r.record;
    j["schema_version"] = io::schema_version;
    j["mode"] = "plan";
    j["inputs"] = {{"h", h}, {"h1", h1}, {"T", T}, {"N", N}, {"eps", eps}};
    j["N_p"] = plan.params.N_p;
    j["N_q"] = plan.params.N_q;
    j["N_c"] = plan.params.N_c;
    j["sigma"] = plan.params.sigma;
    j["x"] = plan.params.x;
    j["x_squared_terms"] = {plan.x_squared_terms[0], plan.x_squared_terms[1], plan.x_squared_terms[2]};
    j["n_q_bumped_for_parity"] = plan.n_q_bumped_for_parity;
    j["window_ok"] = plan.window_ok;
    j["ancilla_qubits_per_site"] = ceil_log2(plan.params.N_c);
    j["budget_terms"] = {budget.trotter_term, budget.controlled_term, budget.translation_term, budget.wraparound_term};
    j["budget_total"] = budget.total;
    j["trotter_term_conservative"] = trotter_term_conservative(h1, T, plan.params.N_p);
    ScalingInputs si{static_cast<double>(N), h, h1, T, eps, io::get_or<double>(b, "alpha", 2.0, P)};
    j["ancilla_reports"] = io::json::array();
    for (const char* ctx : {"generic", "mollified", "longrange", "strong-longrange", "disordered"})
        j["ancilla_reports"].push_back(ancilla_json(ancilla_report(plan.params.N_c, ctx, si)));
    if (budget.total > eps) r.status = bound_violation;
    emit(r, c.out_dir, "plan.json", j.dump(2) + "\n");
    return r;
}

inline RunResult run_verify(const ExperimentConfig& c) {
    const io::json& b = c.body;
    std::vector<std::string> ids;
    if (b.contains("lemma")) ids.push_back(io::get<std::string>(b, "lemma", "config"));
    if (b.contains("lemmas")) {
        auto more = io::get<std::vector<std::string>>(b, "lemmas", "config");
        if (more.empty()) io::schema_error("config.lemmas", "empty list");
        ids.insert(ids.end(), more.begin(), more.end());
    }
    if (ids.empty()) io::schema_error("config", "one of 'lemma' or 'lemmas' is required");
    LemmaGrid grid;
    if (b.contains("grid")) {
        const io::json& g = b.at("grid");
        grid.N_c = io::get_or<std::vector<int>>(g, "N_c", grid.N_c, "config.grid");
        grid.sigma_over_delta = io::get_or<std::vector<double>>(g, "sigma_over_delta", grid.sigma_over_delta, "config.grid");
        if (grid.N_c.empty()) io::schema_error("config.grid.N_c", "empty axis");
        if (grid.sigma_over_delta.empty()) io::schema_error("config.grid.sigma_over_delta", "empty axis");
        grid.window_only = io::get_or<bool>(g, "window_only", true, "config.grid");
    }
    RunResult r;
    io::json& j = r.record;
    j["schema_version"] = io::schema_version;
    j["mode"] = "verify-lemma";
    j["seed"] = c.seed;
    j["lemmas"] = io::json::array();
    for (const auto& id : ids) {
        const auto rows = run_lemma_check(id, c.seed, grid);
        io::Csv csv;
        csv.header = {"lemma", "case", "N_c", "sigma_over_delta", "measured", "rhs", "in_window", "holds"};
        int violations = 0, flagged = 0;
        for (const auto& row : rows) {
            csv.rows.push_back({row.lemma, "\"" + row.label + "\"", std::to_string(row.N_c), io::fmt(row.sigma_over_delta),
                                io::fmt(row.measured), io::fmt(row.rhs), row.in_window ? "1" : "0", row.holds() ? "1" : "0"});
            if (!row.holds()) (row.in_window ? violations : flagged)++;
        }
        emit(r, c.out_dir, "lemma_" + id + ".csv", csv.str());
        j["lemmas"].push_back({{"lemma", id}, {"rows", rows.size()}, {"violations", violations}, {"out_of_window_flags", flagged}});
        if (violations) r.status = bound_violation;
    }
    emit(r, c.out_dir, "verify.json", j.dump(2) + "\n");
    return r;
}

inline MeasureOptions measure_options(const io::json& b) {
    MeasureOptions o;
    if (b.contains("tolerance")) {
        const io::json& t = b.at("tolerance");
        o.timeordered_tol = io::get_or<double>(t, "timeordered", o.timeordered_tol, "config.tolerance");
        o.krylov.tol = io::get_or<double>(t, "krylov", o.krylov.tol, "config.tolerance");
    }
    o.assembly.max_amplitudes = io::get_or<Index>(b, "max_amplitudes", o.assembly.max_amplitudes, "config");
    return o;
}

inline io::json theorem_json(const TheoremCheck& tc) {
    io::json j{{"params", io::params_to_json(tc.params)},
               {"h", tc.norms.h},
               {"h1", tc.norms.h1},
               {"budget", budget_json(tc.budget)},
               {"bound_available", tc.bound_available},
               {"measured", tc.measured},
               {"certificate", tc.certificate},
               {"dim", tc.dim}};
    if (!tc.warning.empty()) j["warning"] = tc.warning;
    return j;
}

inline RunResult run_staticize(const ExperimentConfig& c) {
    const io::json& b = c.body;
    const TimeDepHamiltonian H = load_hamiltonian(b, "config");
    ClockParams p;
    if (b.contains("params")) {
        p = io::parse_params(b.at("params"), "config.params");
    } else {
        const double eps = io::get<double>(b, "eps", "config");
        const HamiltonianNorms nr = compute_norms(H);
        p = plan_parameters(nr.h, nr.h1, H.period(), H.n_sites(), eps).params;
    }
    const Vec psi = parse_state(b, H.n_sites(), "config");
    const MeasureOptions mo = measure_options(b);
    const TheoremCheck tc = check_theorem(H, p, psi, mo);
    RunResult r;
    io::json& j = r.record;
    j["schema_version"] = io::schema_version;
    j["mode"] = "staticize";
    j["inputs"] = {{"n_sites", H.n_sites()}, {"period", H.period()}};
    j["result"] = theorem_json(tc);
    j["timing"] = {{"wall_seconds", tc.wall_seconds}};
    if (tc.params.in_window() && tc.measured > tc.budget.total) r.status = bound_violation;
    if (io::get_or<bool>(b, "export_operator", false, "config")) {
        const StaticizedHamiltonian s = assemble_staticized(H, p, mo.assembly);
        const std::string path = (std::filesystem::path(c.out_dir) / "hbar.mtx").string();
        io::write_matrix_market(path, s.total);
        r.files.push_back(path);
    }
    if (io::get_or<bool>(b, "export_state", false, "config")) {
        const Vec phi0 = product_clock_state(std::vector<int>(H.n_sites(), 0), p).state;
        const std::string path = (std::filesystem::path(c.out_dir) / "initial_state.bin").string();
        io::write_state(path, joint_state(psi, phi0),
                        {{"dims", {{"data", Index{1} << H.n_sites()}, {"clock", phi0.size()}}},
                         {"ordering", "index = data + 2^N * clock; site 0 fastest in each register"},
                         {"params", io::params_to_json(p)}});
        r.files.push_back(path);
        r.files.push_back(path + ".json");
    }
    emit(r, c.out_dir, "run.json", j.dump(2) + "\n");
    return r;
}

inline std::optional<StaticizeRequest> staticize_request(const io::json& b, const std::string& path) {
    if (!b.contains("staticize")) return std::nullopt;
    const io::json& s = b.at("staticize");
    const std::string sp = path + ".staticize";
    StaticizeRequest rq;
    rq.method = parse_method(io::get_or<std::string>(s, "method", "bump", sp));
    if (s.contains("params")) rq.params = io::parse_params(s.at("params"), sp + ".params");
    if (s.contains("eps")) rq.eps = io::get<double>(s, "eps", sp);
    if (s.contains("s")) rq.s = io::get<double>(s, "s", sp);
    rq.mollifier_grid = io::get_or<int>(s, "mollifier_grid", rq.mollifier_grid, sp);
    rq.assembly.max_amplitudes = io::get_or<Index>(s, "max_amplitudes", rq.assembly.max_amplitudes, sp);
    return rq;
}

inline void staticize_schedule_into(RunResult& r, const ProtocolSchedule& sched, const StaticizeRequest& rq, const Vec& psi) {
    const ProtocolStaticization ps = staticize_protocol(sched, rq);
    const ProtocolMeasurement m = measure_protocol(ps, sched, psi);
    io::json j{{"method", rq.method == SmoothingMethod::Bump ? "bump" : "mollify"},
               {"params", io::params_to_json(ps.params)},
               {"h", ps.h},
               {"h1", ps.h1},
               {"budget", budget_json(ps.budget)},
               {"measured", m.measured},
               {"certificate", m.certificate}};
    if (ps.s) j["s"] = *ps.s;
    if (!ps.warning.empty()) j["warning"] = ps.warning;
    r.record["staticized"] = j;
    r.record["timing"]["staticize_seconds"] = m.wall_seconds;
    if (ps.params.in_window() && m.measured > ps.budget.total) r.status = bound_violation;
}

inline RunResult run_protocol(const ExperimentConfig& c) {
    const io::json& b = c.body;
    const std::string P = "config";
    const std::string kind = io::get<std::string>(b, "protocol", P);
    const long max_sites = io::get_or<long>(b, "max_sites", 12, P);
    const cplx a0 = parse_complex(b, "a", 1.0 / std::sqrt(2.0), P), b0 = parse_complex(b, "b", 1.0 / std::sqrt(2.0), P);
    const double nrm = std::sqrt(std::norm(a0) + std::norm(b0));
    if (nrm == 0.0) io::schema_error(P + ".a", "a and b cannot both vanish");
    const cplx a = a0 / nrm, bb = b0 / nrm;
    RunResult r;
    io::json& j = r.record;
    j["schema_version"] = io::schema_version;
    j["mode"] = "protocol";
    j["protocol"] = kind;
    j["timing"] = io::json::object();
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<ProtocolSchedule> sched;
    Vec psi;

    if (kind == "longrange") {
        const int d = io::get<int>(b, "d", P), q = io::get<int>(b, "q", P);
        const double alpha = io::get<double>(b, "alpha", P);
        LongRangeConfig cfg = build_longrange_hierarchy(d, alpha, q);
        const std::string tg = io::get_or<std::string>(b, "hadamard_targets", "sigma", P);
        if (tg == "all_but_spine")
            cfg.targets = HadamardTargets::AllButSpine;
        else if (tg != "sigma")
            io::schema_error(P + ".hadamard_targets", "must be 'sigma' or 'all_but_spine'");
        const LongRangeNorms nr = longrange_norm_h(cfg);
        const LongRangeRuntime rt = longrange_runtime(cfg);
        j["hierarchy"] = {{"m", std::vector<long>(cfg.m.begin() + 1, cfg.m.end())}, {"r", cfg.r}, {"V", cfg.V}, {"N", cfg.N}};
        j["norms"] = {{"H2", nr.h2}, {"H3", nr.h3}, {"H3_printed", nr.h3_printed}, {"h_formula", nr.h_formula},
                      {"h_step_max", nr.h_step_max}, {"h_over_N", nr.h_formula / cfg.N}, {"h_over_N_lower", nr.h_over_N_min}};
        j["runtime"] = {{"T", rt.T}, {"K", rt.K}, {"envelope", rt.envelope}, {"envelope_holds", rt.envelope_holds}};
        if (cfg.regime == LongRangeRegime::Sub) j["runtime"]["kappa"] = rt.kappa, j["runtime"]["lambda"] = rt.lambda;
        if (cfg.regime == LongRangeRegime::Critical) j["runtime"]["gamma"] = rt.gamma;
        if (cfg.N <= static_cast<double>(max_sites)) {
            LongRangeOptions lo;
            lo.max_sites = max_sites;
            const bool transfer = io::get_or<bool>(b, "transfer", false, P);
            sched = transfer ? longrange_transfer_schedule(cfg, lo) : longrange_schedule(cfg, lo);
            const int n = static_cast<int>(cfg.N);
            psi = seed_state(n, longrange_root(cfg), a, bb);
            const Vec target = transfer ? seed_state(n, longrange_root(reflected(cfg)), a, bb) : ghz_state(n, a, bb);
            const Vec out = sched->apply(psi, KrylovOptions{1e-13});
            j["simulation"] = {{"target", transfer ? "transfer" : "ghz"},
                               {"infidelity", std::max(0.0, 1.0 - fidelity(out, target))},
                               {"duration", sched->total_time()},
                               {"steps", sched->steps.size()},
                               {"cap_violations", cap_violations(*sched, alpha).size()}};
        } else {
            j["simulation"] = {{"skipped", "N exceeds max_sites; symbolic analyses only"}};
        }
    } else if (kind == "disordered") {
        DisorderedChainConfig cfg;
        cfg.alpha = io::get_or<double>(b, "alpha", 1.0, P);
        if (b.contains("couplings")) {
            cfg.J = io::get<std::vector<double>>(b, "couplings", P);
            cfg.N = static_cast<int>(cfg.J.size()) + 1;
        } else {
            cfg.N = io::get<int>(b, "N", P);
            auto gen = named_stream(c.seed, "protocol/disordered");
            cfg.J = sample_couplings(cfg.N, cfg.alpha, gen);
        }
        const ProtocolSchedule s = disordered_chain_schedule(cfg);
        j["chain"] = {{"N", cfg.N}, {"couplings", cfg.J}, {"z_c", cfg.z_c()}, {"T_N", disordered_total_time(cfg.J)}};
        if (cfg.N <= max_sites) {
            sched = s;
            psi = seed_state(cfg.N, 0, a, bb);
            const Vec out = s.apply(psi, KrylovOptions{1e-13});
            j["simulation"] = {{"target", "transfer"}, {"infidelity", std::max(0.0, 1.0 - fidelity(out, seed_state(cfg.N, cfg.N - 1, a, bb)))}};
        }
        if (b.contains("scaling")) {
            const io::json& sc = b.at("scaling");
            const auto sizes = io::get_or<std::vector<int>>(sc, "sizes", {64, 256, 1024, 4096}, P + ".scaling");
            if (sizes.empty()) io::schema_error(P + ".scaling.sizes", "empty axis");
            const int reps = io::get_or<int>(sc, "realizations", 20, P + ".scaling");
            const ScalingStudy st = disordered_scaling_study(cfg.alpha, sizes, reps, c.seed);
            j["scaling"] = {{"sizes", st.sizes}, {"median_below", st.median_below}, {"median_above", st.median_above},
                            {"increasing_below", st.increasing_below}, {"decreasing_above", st.decreasing_above}};
        }
    } else if (kind == "strong_longrange") {
        const int N = io::get<int>(b, "N", P), d = io::get<int>(b, "d", P);
        const double alpha = io::get<double>(b, "alpha", P);
        const io::json& tp = io::field(b, "tau_params", P);
        StrongLongRangeParams sp{io::get<double>(tp, "tau1", P + ".tau_params"), io::get<double>(tp, "tau2", P + ".tau_params"),
                                 io::get<double>(tp, "tau3", P + ".tau_params"), io::get<double>(tp, "theta", P + ".tau_params")};
        StrongLongRangeResult res = strong_longrange_schedule(N, d, alpha, sp);
        io::json viol = io::json::array();
        for (const auto& v : res.violations) viol.push_back({{"u", v.u}, {"v", v.v}, {"norm", v.norm}, {"cap", v.cap}});
        j["analysis"] = {{"h_printed_max", res.h_printed_max},
                         {"h_printed_asymptotic", res.h_printed_asymptotic},
                         {"piece_norm_sums", res.piece_norm_sums},
                         {"duration", res.schedule.total_time()},
                         {"time_scale", res.time_scale},
                         {"cap_violations", viol}};
        if (N <= max_sites) {
            sched = res.schedule;
            psi = seed_state(N, 0, a, bb);
            const Vec out = res.schedule.apply(psi, KrylovOptions{1e-13});
            j["simulation"] = {{"target", "ghz"}, {"infidelity", std::max(0.0, 1.0 - fidelity(out, ghz_state(N, a, bb)))}};
        }
    } else {
        io::schema_error(P + ".protocol", "unknown protocol '" + kind + "' (longrange, strong_longrange, disordered)");
    }
    j["timing"]["protocol_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (auto rq = staticize_request(b, P)) {
        require(sched.has_value(), errc::dimension_cap, "staticization needs a materialized schedule (raise max_sites)");
        staticize_schedule_into(r, *sched, *rq, psi);
    }
    if (sched && io::get_or<bool>(b, "export_schedule", false, P)) emit(r, c.out_dir, "schedule.json", io::schedule_to_json(*sched).dump(2) + "\n");
    emit(r, c.out_dir, "protocol.json", j.dump(2) + "\n");
    return r;
}

inline RunResult run_sweep(const ExperimentConfig& c) {
    const io::json& b = c.body;
    const std::string P = "config";
    const TimeDepHamiltonian H = load_hamiltonian(b, P);
    const io::json& axes = io::field(b, "axes", P);
    const auto ncs = io::get<std::vector<int>>(axes, "N_c", P + ".axes");
    if (ncs.empty()) io::schema_error(P + ".axes.N_c", "empty axis");
    const bool by_tau = axes.contains("sigma_over_tau");
    const std::string ax = by_tau ? "sigma_over_tau" : "sigma_over_delta";
    const auto ratios = io::get<std::vector<double>>(axes, ax, P + ".axes");
    if (ratios.empty()) io::schema_error(P + ".axes." + ax, "empty axis");
    const int N_p = io::get<int>(b, "N_p", P);
    const Vec psi = parse_state(b, H.n_sites(), P);
    const MeasureOptions mo = measure_options(b);

    struct Point {
        ClockParams p;
        std::optional<TheoremCheck> tc;
        std::string error;
    };
    std::vector<Point> pts;
    for (int nc : ncs)
        for (double r : ratios) {
            if (nc % N_p) io::schema_error(P + ".axes.N_c", "every N_c must be a multiple of N_p");
            const double sigma = by_tau ? r * H.period() / N_p : r * H.period() / nc;
            pts.push_back({ClockParams::make(N_p, nc / N_p, H.period(), sigma), std::nullopt, {}});
        }
    parallel_for(static_cast<long>(pts.size()), [&](long i) {
        try {
            pts[i].tc = check_theorem(H, pts[i].p, psi, mo);
        } catch (const Error& e) {
            if (e.kind() != errc::dimension_cap) throw;
            pts[i].error = e.what();
        }
    });

    RunResult r;
    io::Csv csv;
    csv.header = {"N_c", "N_p", "sigma_over_delta", "in_window", "trotter_term", "controlled_term", "translation_term",
                  "wraparound_term", "total", "measured", "certificate", "flag"};
    io::json& j = r.record;
    j["schema_version"] = io::schema_version;
    j["mode"] = "sweep";
    j["rows"] = io::json::array();
    double wall = 0.0;
    for (const auto& pt : pts) {
        const double sod = pt.p.sigma / pt.p.delta;
        if (!pt.tc) {
            csv.rows.push_back({std::to_string(pt.p.N_c), std::to_string(N_p), io::fmt(sod), pt.p.in_window() ? "1" : "0",
                                "", "", "", "", "", "", "", "resource-cap"});
            j["rows"].push_back({{"params", io::params_to_json(pt.p)}, {"error", pt.error}});
            r.status = resource_cap;
            continue;
        }
        const TheoremCheck& tc = *pt.tc;
        wall += tc.wall_seconds;
        const bool win = pt.p.in_window();
        const bool bad = win && tc.measured > tc.budget.total;
        if (bad && r.status == ok) r.status = bound_violation;
        const auto num = [&](double v) { return tc.bound_available ? io::fmt(v) : std::string(); };
        csv.rows.push_back({std::to_string(pt.p.N_c), std::to_string(N_p), io::fmt(sod), win ? "1" : "0",
                            num(tc.budget.trotter_term), num(tc.budget.controlled_term), num(tc.budget.translation_term),
                            num(tc.budget.wraparound_term), num(tc.budget.total), io::fmt(tc.measured),
                            io::fmt(tc.certificate), bad ? "violation" : (win ? "" : "out-of-window")});
        j["rows"].push_back(theorem_json(tc));
    }
    j["timing"] = {{"wall_seconds", wall}};
    emit(r, c.out_dir, "sweep.csv", csv.str());
    emit(r, c.out_dir, "sweep.json", j.dump(2) + "\n");
    return r;
}

} // namespace detail

// Runs one experiment; results go to cfg.out_dir. Config and resource errors
// become exit statuses with whatever was written so far left in place.
inline RunResult run(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    try {
        switch (cfg.mode) {
        case Mode::Plan: return detail::run_plan(cfg);
        case Mode::VerifyLemma: return detail::run_verify(cfg);
        case Mode::Staticize: return detail::run_staticize(cfg);
        case Mode::Protocol: return detail::run_protocol(cfg);
        case Mode::Sweep: return detail::run_sweep(cfg);
        }
    } catch (const Error& e) {
        RunResult r;
        r.status = e.kind() == errc::dimension_cap ? resource_cap : config_error;
        r.message = e.what();
        return r;
    } catch (const io::json::exception& e) {
        RunResult r;
        r.status = config_error;
        r.message = std::string("config: ") + e.what();
        return r;
    }
    return {};
}

} // namespace staticize
