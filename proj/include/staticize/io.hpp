#pragma once

#include "fourier.hpp"
#include "ham_model.hpp"
#include "params.hpp"
#include "smoothing.hpp"

#include <json.hpp>
#include <unsupported/Eigen/SparseExtra>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace staticize::io {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

// Schema errors carry the JSON path of the offending field.
[[noreturn]] inline void schema_error(const std::string& path, const std::string& msg) {
    fail(errc::config, path + ": " + msg);
}

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) schema_error(path + "." + key, "missing");
    return j.at(key);
}

template <class T>
T get(const json& j, const std::string& key, const std::string& path) {
    const json& v = field(j, key, path);
    try {
        return v.get<T>();
    } catch (const json::exception& e) {
        schema_error(path + "." + key, std::string("wrong type (") + e.what() + ")");
    }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& path) {
    return j.is_object() && j.contains(key) ? get<T>(j, key, path) : fallback;
}

// ---- matrices ---------------------------------------------------------------

// A local operator is either rows of entries (number or [re, im]) or a Pauli
// expansion {"XZ": c, ...}; character k of a Pauli string acts on the k-th
// site of the support.
inline Mat parse_matrix(const json& j, int dim, const std::string& path) {
    if (j.is_object()) {
        const int n = dim == 4 ? 2 : 1;
        Mat m = Mat::Zero(dim, dim);
        for (const auto& [key, val] : j.items()) {
            if (static_cast<int>(key.size()) != n) schema_error(path + "." + key, "Pauli string must have length " + std::to_string(n));
            Mat ops[2];
            for (int k = 0; k < n; ++k) {
                switch (key[k]) {
                case 'I': ops[k] = pauli::id(); break;
                case 'X': ops[k] = pauli::x(); break;
                case 'Y': ops[k] = pauli::y(); break;
                case 'Z': ops[k] = pauli::z(); break;
                default: schema_error(path + "." + key, "Pauli letters are I, X, Y, Z");
                }
            }
            if (!val.is_number()) schema_error(path + "." + key, "coefficient must be a real number");
            m += val.get<double>() * (n == 1 ? ops[0] : pair_op(ops[0], ops[1]));
        }
        return m;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != dim) schema_error(path, "expected " + std::to_string(dim) + " rows");
    Mat m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            schema_error(path + "[" + std::to_string(r) + "]", "expected " + std::to_string(dim) + " entries");
        for (int c = 0; c < dim; ++c) {
            const json& e = row[c];
            const std::string ep = path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            } else {
                schema_error(ep, "entry must be a number or [re, im]");
            }
        }
    }
    return m;
}

inline json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<Mat> parse_matrices(const json& j, int dim, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected an array of matrices");
    std::vector<Mat> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(parse_matrix(j[i], dim, path + "[" + std::to_string(i) + "]"));
    return out;
}

// ---- graphs and Hamiltonians ----------------------------------------------

inline SiteGraph parse_graph(const json& j, const std::string& path) {
    const char* nk = j.contains("n_vertices") ? "n_vertices" : "n_sites";
    const int n = get<int>(j, nk, path);
    if (n < 1) schema_error(path + "." + nk, "must be positive");
    SiteGraph g = SiteGraph::isolated(n);
    g.d = get_or<int>(j, "d", 1, path);
    if (j.contains("edges")) {
        const json& es = j.at("edges");
        if (!es.is_array()) schema_error(path + ".edges", "expected an array");
        for (size_t e = 0; e < es.size(); ++e) {
            const std::string ep = path + ".edges[" + std::to_string(e) + "]";
            g.add_edge(get<int>(es[e], "u", ep), get<int>(es[e], "v", ep), get_or<double>(es[e], "weight", 1.0, ep),
                       get_or<int>(es[e], "control", -1, ep));
        }
    }
    if (j.contains("vertex_cap")) g.vertex_cap = get<double>(j, "vertex_cap", path);
    if (j.contains("alpha")) g.alpha = get<double>(j, "alpha", path);
    if (j.contains("coords")) g.coords = get<std::vector<std::vector<int>>>(j, "coords", path);
    return g;
}

inline json graph_to_json(const SiteGraph& g) {
    json j;
    j["n_vertices"] = g.n;
    j["d"] = g.d;
    j["edges"] = json::array();
    for (size_t e = 0; e < g.edges.size(); ++e)
        j["edges"].push_back({{"u", g.edges[e].first}, {"v", g.edges[e].second}, {"weight", g.weight[e]}, {"control", g.control[e]}});
    if (g.vertex_cap) j["vertex_cap"] = *g.vertex_cap;
    if (g.alpha) j["alpha"] = *g.alpha;
    if (!g.coords.empty()) j["coords"] = g.coords;
    return j;
}

// {"vertex": i} or {"edge": e}, either inline or under "support".
inline Support parse_support(const json& t0, const std::string& path0) {
    const bool nested = t0.contains("support");
    const json& t = nested ? t0.at("support") : t0;
    const std::string path = nested ? path0 + ".support" : path0;
    const bool v = t.contains("vertex"), e = t.contains("edge");
    if (v == e) schema_error(path, "exactly one of 'vertex' or 'edge' is required");
    return v ? Support::vertex(get<int>(t, "vertex", path)) : Support::edge(get<int>(t, "edge", path));
}

// Kind-specific fields sit next to "kind" or inside a "data" object.
inline TermSchedule parse_term(const json& t0, double period, const std::string& path0) {
    const Support s = parse_support(t0, path0);
    const int dim = s.is_edge ? 4 : 2;
    const std::string kind = get<std::string>(t0, "kind", path0);
    const bool nested = t0.contains("data");
    const json& t = nested ? t0.at("data") : t0;
    const std::string path = nested ? path0 + ".data" : path0;
    if (kind == "constant") return TermSchedule::constant(s, parse_matrix(field(t, "matrix", path), dim, path + ".matrix"));
    if (kind == "piecewise")
        return TermSchedule::piecewise(s, get<std::vector<double>>(t, "starts", path),
                                       parse_matrices(field(t, "matrices", path), dim, path + ".matrices"));
    if (kind == "sampled") {
        std::vector<Mat> ders;
        if (t.contains("derivatives")) ders = parse_matrices(t.at("derivatives"), dim, path + ".derivatives");
        return TermSchedule::sampled(s, get<std::vector<double>>(t, "grid", path),
                                     parse_matrices(field(t, "values", path), dim, path + ".values"), ders);
    }
    if (kind == "fourier") {
        FourierTerm f;
        f.T = period;
        f.a = parse_matrices(field(t, "cos", path), dim, path + ".cos");
        if (f.a.empty()) schema_error(path + ".cos", "needs at least the constant part");
        f.b.assign(f.a.size(), Mat::Zero(dim, dim));
        if (t.contains("sin")) {
            auto b = parse_matrices(t.at("sin"), dim, path + ".sin"); // sin[k-1] multiplies sin(2 pi k t / T)
            if (b.size() + 1 > f.a.size()) {
                f.a.resize(b.size() + 1, Mat::Zero(dim, dim));
                f.b.resize(b.size() + 1, Mat::Zero(dim, dim));
            }
            for (size_t k = 0; k < b.size(); ++k) f.b[k + 1] = b[k];
        }
        return fourier_schedule(s, f);
    }
    schema_error(path0 + ".kind", "unknown term kind '" + kind + "' (constant, piecewise, sampled, fourier)");
}

inline TimeDepHamiltonian parse_hamiltonian(const json& j, const std::string& path = "hamiltonian") {
    SiteGraph g = parse_graph(j, path);
    const double T = get<double>(j, "period", path);
    const std::string sm = get_or<std::string>(j, "smoothness", "piecewise", path);
    if (sm != "piecewise" && sm != "periodic") schema_error(path + ".smoothness", "must be 'piecewise' or 'periodic'");
    const json& ts = field(j, "terms", path);
    if (!ts.is_array()) schema_error(path + ".terms", "expected an array");
    std::vector<TermSchedule> terms;
    for (size_t i = 0; i < ts.size(); ++i) terms.push_back(parse_term(ts[i], T, path + ".terms[" + std::to_string(i) + "]"));
    return TimeDepHamiltonian(g, std::move(terms), T,
                              sm == "periodic" ? Smoothness::DifferentiablePeriodic : Smoothness::PiecewiseContinuous);
}

// Closed-form terms have no serial form.
inline json hamiltonian_to_json(const TimeDepHamiltonian& H) {
    json j = graph_to_json(H.graph());
    j["schema_version"] = schema_version;
    j["period"] = H.period();
    j["smoothness"] = H.smoothness() == Smoothness::DifferentiablePeriodic ? "periodic" : "piecewise";
    j["terms"] = json::array();
    for (const auto& t : H.terms()) {
        json jt;
        jt[t.support.is_edge ? "edge" : "vertex"] = t.support.index;
        auto mats = [](const std::vector<Mat>& ms) {
            json a = json::array();
            for (const auto& m : ms) a.push_back(matrix_to_json(m));
            return a;
        };
        switch (t.kind) {
        case TermKind::Constant:
            jt["kind"] = "constant";
            jt["matrix"] = matrix_to_json(t.values[0]);
            break;
        case TermKind::Piecewise:
            jt["kind"] = "piecewise";
            jt["starts"] = t.times;
            jt["matrices"] = mats(t.values);
            break;
        case TermKind::Sampled:
            jt["kind"] = "sampled";
            jt["grid"] = t.times;
            jt["values"] = mats(t.values);
            jt["derivatives"] = mats(t.derivs);
            break;
        case TermKind::ClosedForm:
            fail(errc::invalid_argument, "closed-form terms cannot be serialized; sample them first");
        }
        j["terms"].push_back(jt);
    }
    return j;
}

inline json schedule_to_json(const ProtocolSchedule& s) {
    json j = hamiltonian_to_json(s.as_piecewise());
    j["step_labels"] = json::array();
    j["step_durations"] = json::array();
    for (const auto& st : s.steps) {
        j["step_labels"].push_back(st.label);
        j["step_durations"].push_back(st.duration);
    }
    return j;
}

inline ClockParams parse_params(const json& j, const std::string& path) {
    const int N_p = get<int>(j, "N_p", path);
    const int N_q = get<int>(j, "N_q", path);
    const double T = get<double>(j, "T", path);
    const bool has_s = j.contains("sigma"), has_r = j.contains("sigma_over_delta");
    if (has_s == has_r) schema_error(path, "exactly one of 'sigma' or 'sigma_over_delta' is required");
    try {
        return has_s ? ClockParams::make(N_p, N_q, T, get<double>(j, "sigma", path))
                     : ClockParams::with_ratio(N_p, N_q, T, get<double>(j, "sigma_over_delta", path));
    } catch (const Error& e) {
        schema_error(path, e.what());
    }
}

inline json params_to_json(const ClockParams& p) {
    return {{"N_p", p.N_p}, {"N_q", p.N_q}, {"N_c", p.N_c}, {"T", p.T},       {"delta", p.delta},
            {"tau", p.tau}, {"sigma", p.sigma}, {"x", p.x}, {"in_window", p.in_window()}};
}

// ---- files ------------------------------------------------------------------

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), errc::config, "cannot write " + path);
    f << text;
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json(const std::string& path) {
    std::ifstream f(path);
    require(static_cast<bool>(f), errc::config, "cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        fail(errc::config, path + ": " + e.what());
    }
}

// Operators in Matrix Market coordinate format.
inline void write_matrix_market(const std::string& path, const SpMat& m) {
    require(Eigen::saveMarket(m, path), errc::config, "cannot write " + path);
}

// Little-endian f64 pairs (re, im) plus a JSON sidecar describing the layout.
inline void write_state(const std::string& path, const Vec& psi, const json& sidecar) {
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), errc::config, "cannot write " + path);
    static_assert(sizeof(double) == 8);
    for (Index i = 0; i < psi.size(); ++i) {
        const double re = psi(i).real(), im = psi(i).imag();
        f.write(reinterpret_cast<const char*>(&re), 8);
        f.write(reinterpret_cast<const char*>(&im), 8);
    }
    json s = sidecar;
    s["length"] = psi.size();
    s["format"] = "little-endian float64, interleaved re/im";
    write_json(path + ".json", s);
}

inline Vec read_state(const std::string& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    require(static_cast<bool>(f), errc::config, "cannot open " + path);
    const auto bytes = static_cast<Index>(f.tellg());
    require(bytes % 16 == 0, errc::config, path + ": size is not a multiple of 16 bytes");
    f.seekg(0);
    Vec v(bytes / 16);
    for (Index i = 0; i < v.size(); ++i) {
        double re, im;
        f.read(reinterpret_cast<char*>(&re), 8);
        f.read(reinterpret_cast<char*>(&im), 8);
        v(i) = cplx(re, im);
    }
    return v;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string str() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
            out += "\n";
        };
        line(header);
        for (const auto& r : rows) line(r);
        return out;
    }
};

} // namespace staticize::io
