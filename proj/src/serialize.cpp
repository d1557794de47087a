#include "qgeo/serialize.hpp"

#include "qgeo/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qgeo {
namespace serialize {

namespace {

using nlohmann::json;

constexpr const char* kTraceSchema = "qgeo-trace-1";

json unitary_json(const CMat& U) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < U.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < U.cols(); ++c) {
            row.push_back({U(r, c).real(), U(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    int n = 0;
    for (Eigen::Index d = U.rows(); d > 1; d >>= 1) ++n;
    return json{{"n", n}, {"matrix", std::move(rows)}};
}

CMat unitary_from(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("matrix")) {
        throw InputError("unitary JSON: expected fields 'n' and 'matrix'");
    }
    const int n = j["n"].get<int>();
    if (n < 1 || n > 6) throw InputError("unitary JSON: n out of range [1,6]");
    const Eigen::Index dim = Eigen::Index{1} << n;
    const json& rows = j["matrix"];
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim) {
        throw InputError("unitary JSON: matrix must have 2^n rows");
    }
    CMat U(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const json& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
            throw InputError("unitary JSON: row " + std::to_string(r) + " has wrong length");
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            const json& e = row[static_cast<std::size_t>(c)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw InputError("unitary JSON: entries must be [re, im] pairs");
            }
            U(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return U;
}

json coeffs_json(const pauli::CoeffVector& v) {
    json c = json::array();
    for (Eigen::Index i = 0; i < v.values.size(); ++i) c.push_back(v.values[i]);
    return json{{"n", v.n}, {"coeffs", std::move(c)}};
}

pauli::CoeffVector coeffs_from(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("coeffs")) {
        throw InputError("coeff JSON: expected fields 'n' and 'coeffs'");
    }
    pauli::CoeffVector v = pauli::CoeffVector::zero(j["n"].get<int>());
    const json& c = j["coeffs"];
    if (!c.is_array() || static_cast<std::int64_t>(c.size()) != pauli::basis_size(v.n)) {
        throw InputError("coeff JSON: wrong coefficient count");
    }
    for (std::size_t i = 0; i < c.size(); ++i) v.values[static_cast<Eigen::Index>(i)] = c[i].get<double>();
    return v;
}

json config_json(const continuation::ContinuationConfig& cfg) {
    return json{{"q_max", cfg.q_max},
                {"N_t", cfg.N_t},
                {"record_count", cfg.record_count},
                {"geo_rtol", cfg.geo_rtol},
                {"geo_atol", cfg.geo_atol},
                {"cont_rtol", cfg.cont_rtol},
                {"cont_atol", cfg.cont_atol},
                {"abort_boundary_error", cfg.abort_boundary_error}};
}

continuation::ContinuationConfig config_from(const json& j) {
    continuation::ContinuationConfig cfg;
    cfg.q_max = j.at("q_max").get<double>();
    cfg.N_t = j.at("N_t").get<int>();
    cfg.record_count = j.at("record_count").get<int>();
    cfg.geo_rtol = j.at("geo_rtol").get<double>();
    cfg.geo_atol = j.at("geo_atol").get<double>();
    cfg.cont_rtol = j.at("cont_rtol").get<double>();
    cfg.cont_atol = j.at("cont_atol").get<double>();
    cfg.abort_boundary_error = j.at("abort_boundary_error").get<double>();
    return cfg;
}

}  // namespace

std::string unitary_to_json(const CMat& U) { return unitary_json(U).dump(); }

CMat unitary_from_json(const std::string& bytes) {
    try {
        return unitary_from(json::parse(bytes));
    } catch (const json::parse_error& e) {
        throw InputError("unitary JSON syntax error at byte " + std::to_string(e.byte) + ": " +
                         e.what());
    }
}

std::string coeffs_to_json(const pauli::CoeffVector& v) { return coeffs_json(v).dump(); }

pauli::CoeffVector coeffs_from_json(const std::string& bytes) {
    try {
        return coeffs_from(json::parse(bytes));
    } catch (const json::parse_error& e) {
        throw InputError("coeff JSON syntax error at byte " + std::to_string(e.byte) + ": " +
                         e.what());
    }
}

std::string solution_to_json(const geodesic::GeodesicSolution& sol, bool include_U) {
    json j;
    j["params"] = json{{"n", sol.params.n}, {"q", sol.params.q}};
    j["T"] = sol.T;
    j["times"] = sol.times;
    json hs = json::array();
    for (const pauli::CoeffVector& h : sol.H_samples) {
        json c = json::array();
        for (Eigen::Index i = 0; i < h.values.size(); ++i) c.push_back(h.values[i]);
        hs.push_back(std::move(c));
    }
    j["H_samples"] = std::move(hs);
    j["complexity"] = sol.complexity;
    j["boundary_error"] = sol.boundary_error;
    j["boundary_error_raw"] = sol.boundary_error_raw;
    if (include_U) {
        json us = json::array();
        for (const CMat& U : sol.U_samples) us.push_back(unitary_json(U));
        j["U_samples"] = std::move(us);
    }
    return j.dump();
}

std::string trace_to_json(const continuation::ContinuationTrace& trace) {
    json j;
    j["schema"] = kTraceSchema;
    j["target_id"] = trace.target_id;
    j["n"] = trace.n;
    j["target"] = unitary_json(trace.target);
    j["config"] = config_json(trace.config);
    j["q_values"] = trace.q_values;
    json recs = json::array();
    for (const continuation::ContinuationRecord& r : trace.records) {
        json c = json::array();
        for (Eigen::Index i = 0; i < r.H0.values.size(); ++i) c.push_back(r.H0.values[i]);
        recs.push_back(json{{"q", r.q},
                            {"H0", std::move(c)},
                            {"complexity", r.complexity},
                            {"boundary_error_raw", r.boundary_error_raw},
                            {"boundary_error_phase_invariant", r.boundary_error_phase_invariant}});
    }
    j["records"] = std::move(recs);
    if (trace.state.has_value()) {
        json sc = json::array();
        for (Eigen::Index i = 0; i < trace.state->H0.values.size(); ++i) {
            sc.push_back(trace.state->H0.values[i]);
        }
        j["state"] = json{{"next_record", trace.state->next_record},
                          {"q", trace.state->q},
                          {"H0", std::move(sc)},
                          {"step_size", trace.state->step_size}};
    }
    return j.dump();
}

continuation::ContinuationTrace trace_from_json(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw InputError("trace JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("schema")) throw InputError("trace JSON: missing schema field");
    if (j["schema"].get<std::string>() != kTraceSchema) {
        throw InputError("trace JSON: schema version mismatch (found '" +
                         j["schema"].get<std::string>() + "', expected '" + kTraceSchema + "')");
    }
    continuation::ContinuationTrace trace;
    trace.target_id = j.at("target_id").get<std::string>();
    trace.n = j.at("n").get<int>();
    trace.target = unitary_from(j.at("target"));
    trace.config = config_from(j.at("config"));
    trace.q_values = j.at("q_values").get<std::vector<double>>();
    for (const json& jr : j.at("records")) {
        continuation::ContinuationRecord r;
        r.q = jr.at("q").get<double>();
        r.H0 = pauli::CoeffVector::zero(trace.n);
        const json& c = jr.at("H0");
        if (static_cast<std::int64_t>(c.size()) != pauli::basis_size(trace.n)) {
            throw InputError("trace JSON: record coefficient count mismatch");
        }
        for (std::size_t i = 0; i < c.size(); ++i) {
            r.H0.values[static_cast<Eigen::Index>(i)] = c[i].get<double>();
        }
        r.complexity = jr.at("complexity").get<double>();
        r.boundary_error_raw = jr.at("boundary_error_raw").get<double>();
        r.boundary_error_phase_invariant = jr.at("boundary_error_phase_invariant").get<double>();
        trace.records.push_back(std::move(r));
    }
    if (j.contains("state")) {
        const json& js = j["state"];
        continuation::IntegratorState st;
        st.next_record = js.at("next_record").get<std::size_t>();
        st.q = js.at("q").get<double>();
        st.H0 = pauli::CoeffVector::zero(trace.n);
        const json& c = js.at("H0");
        for (std::size_t i = 0; i < c.size(); ++i) {
            st.H0.values[static_cast<Eigen::Index>(i)] = c[i].get<double>();
        }
        st.step_size = js.at("step_size").get<double>();
        trace.state = std::move(st);
    }
    return trace;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string target_hash(const CMat& rephased_target) {
    const std::uint64_t h = fnv1a64(unitary_to_json(rephased_target));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string control_schedule_csv(const continuation::ControlSchedule& cs) {
    std::ostringstream out;
    out << "t";
    for (std::size_t i = 0; i < cs.labels.size(); ++i) {
        out << ',' << (cs.penalized[i] ? "Q:" : "") << cs.labels[i];
    }
    out << '\n';
    char buf[32];
    for (std::size_t r = 0; r < cs.times.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "%.17g", cs.times[r]);
        out << buf;
        for (double v : cs.values[r]) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write file: " + tmp);
        out << bytes;
        out.flush();
        if (!out) throw InputError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw InputError("atomic rename failed for: " + path);
    }
}

}  // namespace serialize
}  // namespace qgeo
