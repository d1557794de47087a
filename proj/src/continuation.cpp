#include "qgeo/continuation.hpp"

#include "qgeo/errors.hpp"
#include "qgeo/jacobi.hpp"
#include "qgeo/matfun.hpp"
#include "qgeo/ode.hpp"
#include "qgeo/serialize.hpp"

#include <cmath>

namespace qgeo {
namespace continuation {

namespace {

bool q_part_vanishes(const pauli::CoeffVector& H) {
    const std::int64_t m = pauli::basis_size(H.n);
    for (std::int64_t code = 1; code <= m; ++code) {
        if (pauli::weight_of_code(H.n, code) >= 3 && H.values[code - 1] != 0.0) return false;
    }
    return true;
}

std::vector<double> q_grid(double q_max, int record_count) {
    if (!(q_max >= 1.0)) throw InputError("continuation: q_max must be >= 1");
    if (record_count < 2) throw InputError("continuation: record_count must be >= 2");
    if (q_max == 1.0) return {1.0};
    std::vector<double> q(static_cast<std::size_t>(record_count));
    const double s_max = std::log(q_max);
    for (int k = 0; k < record_count; ++k) {
        q[static_cast<std::size_t>(k)] = std::exp(s_max * k / (record_count - 1));
    }
    q.front() = 1.0;
    q.back() = q_max;
    return q;
}

geodesic::EvolveOptions evolve_options(const ContinuationConfig& cfg) {
    geodesic::EvolveOptions opts;
    opts.N_t = cfg.N_t;
    opts.rtol = cfg.geo_rtol;
    opts.atol = cfg.geo_atol;
    return opts;
}

// dH0/ds = q dH0/dq at penalty q = e^s. The q = 1 branch applies only at the
// exact base point; in between the q > 1 closed form is used. A state with no
// weight-3 content has identically zero derivative and skips the Jacobi solve.
pauli::CoeffVector continuation_rhs(double s, const pauli::CoeffVector& H0,
                                    const ContinuationConfig& cfg, int n) {
    const double q = std::exp(s);
    if (q_part_vanishes(H0)) return pauli::CoeffVector::zero(n);

    const pauli::PenaltyParams params{n, q};
    const geodesic::GeodesicSolution sol = geodesic::evolve_geodesic(H0, params, evolve_options(cfg));
    const jacobi::JacobiPropagator JP = jacobi::jacobi_propagator(sol, params);
    const CMat JP_inv = jacobi::invert_jacobi(JP);
    pauli::CoeffVector d = jacobi::dH0_dq(H0, params, sol, JP_inv);
    d.values *= q;
    return d;
}

ContinuationRecord make_record(const pauli::CoeffVector& H0, double q, const CMat& target,
                               const ContinuationConfig& cfg) {
    const pauli::PenaltyParams params{H0.n, q};
    const geodesic::GeodesicSolution sol =
        geodesic::evolve_geodesic(H0, params, evolve_options(cfg), &target);
    ContinuationRecord rec;
    rec.q = q;
    rec.H0 = H0;
    rec.complexity = sol.complexity;
    rec.boundary_error_raw = sol.boundary_error_raw;
    rec.boundary_error_phase_invariant = sol.boundary_error;
    if (rec.boundary_error_phase_invariant > cfg.abort_boundary_error) {
        throw NumericalError("continuation: boundary error " +
                             std::to_string(rec.boundary_error_phase_invariant) +
                             " at q = " + std::to_string(q) + " exceeds abort threshold");
    }
    return rec;
}

ContinuationTrace drive(ContinuationTrace trace, const RecordCallback& on_record,
                        const StopFlag& should_stop) {
    const ContinuationConfig& cfg = trace.config;
    const int n = trace.n;

    if (trace.records.empty()) {
        pauli::CoeffVector H0 = initialize_base(trace.target);
        ContinuationRecord rec = make_record(H0, 1.0, trace.target, cfg);
        if (rec.boundary_error_phase_invariant > 1e-7) {
            throw NumericalError("continuation: base solution misses the target (error " +
                                 std::to_string(rec.boundary_error_phase_invariant) + ")");
        }
        trace.records.push_back(std::move(rec));
        trace.state = IntegratorState{1, 1.0, H0, 0.0};
        if (on_record) on_record(trace, trace.records.back());
    }

    IntegratorState st = *trace.state;
    std::vector<double> y(st.H0.values.data(), st.H0.values.data() + st.H0.values.size());

    while (st.next_record < trace.q_values.size()) {
        if (should_stop && should_stop()) {
            trace.state = st;
            return trace;
        }
        const double s0 = std::log(trace.q_values[st.next_record - 1]);
        const double s1 = std::log(trace.q_values[st.next_record]);

        pauli::CoeffVector h_state = pauli::CoeffVector::zero(n);
        auto rhs = [&](double s, const std::vector<double>& v, std::vector<double>& dv) {
            if (should_stop && should_stop()) {
                throw InterruptedError("continuation interrupted");
            }
            h_state.values = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
            // exp(0) = 1 exactly, so the base point lands on the q = 1 branch.
            const pauli::CoeffVector d = continuation_rhs(s, h_state, cfg, n);
            Eigen::Map<Eigen::VectorXd>(dv.data(), dv.size()) = d.values;
        };

        ode::Options oopt;
        oopt.rtol = cfg.cont_rtol;
        oopt.atol = cfg.cont_atol;
        oopt.h_init = st.step_size > 0.0 ? st.step_size : (s1 - s0);
        double h_next = 0.0;
        try {
            h_next = ode::integrate(rhs, s0, s1, y, oopt);
        } catch (const InterruptedError&) {
            trace.state = st;
            return trace;
        }

        pauli::CoeffVector H0 = pauli::CoeffVector::zero(n);
        H0.values = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
        const double q = trace.q_values[st.next_record];
        trace.records.push_back(make_record(H0, q, trace.target, cfg));
        st = IntegratorState{st.next_record + 1, q, H0, h_next};
        trace.state = st;
        if (on_record) on_record(trace, trace.records.back());
    }

    trace.state.reset();
    return trace;
}

}  // namespace

pauli::CoeffVector initialize_base(const CMat& U_T) {
    const CMat su = matfun::rephase_to_su(U_T);
    const CMat H0 = matfun::remove_trace(matfun::principal_hamiltonian(su, 1.0));
    return pauli::decompose(H0);
}

ContinuationTrace run_continuation(const CMat& U_T, const ContinuationConfig& config,
                                   const RecordCallback& on_record, const StopFlag& should_stop) {
    const int n = matfun::qubits_of(U_T);
    if (n > pauli::kMaxQubits) throw InputError("run_continuation: too many qubits");

    ContinuationTrace trace;
    trace.n = n;
    trace.config = config;
    if (trace.config.q_max <= 0.0) {
        trace.config.q_max = static_cast<double>((std::int64_t{1} << (2 * n)) - 1);
    }
    trace.target = matfun::rephase_to_su(U_T);
    trace.target_id = serialize::target_hash(trace.target);
    trace.q_values = q_grid(trace.config.q_max, trace.config.record_count);
    return drive(std::move(trace), on_record, should_stop);
}

ContinuationTrace resume_continuation(ContinuationTrace trace, const RecordCallback& on_record,
                                      const StopFlag& should_stop) {
    if (trace.complete()) return trace;
    if (!trace.state.has_value()) {
        throw InputError("resume_continuation: trace has no integrator state");
    }
    return drive(std::move(trace), on_record, should_stop);
}

void checkpoint(const ContinuationTrace& trace, const std::string& path) {
    serialize::write_file_atomic(path, serialize::trace_to_json(trace));
}

ContinuationTrace resume(const std::string& path) {
    return serialize::trace_from_json(serialize::read_file(path));
}

const ContinuationRecord& record_at(const ContinuationTrace& trace, double q) {
    if (trace.records.empty()) throw InputError("trace has no records");
    if (q < 0.0) return trace.records.back();
    for (const ContinuationRecord& rec : trace.records) {
        if (std::abs(rec.q - q) <= 1e-9 * std::max(1.0, q)) return rec;
    }
    throw InputError("q = " + std::to_string(q) + " is not a recorded value");
}

ControlSchedule export_controls(const ContinuationTrace& trace, double q, int N_t) {
    const ContinuationRecord& rec = record_at(trace, q);
    const pauli::PenaltyParams params{trace.n, rec.q};
    geodesic::EvolveOptions opts = evolve_options(trace.config);
    if (N_t >= 2) opts.N_t = N_t;
    const geodesic::GeodesicSolution sol = geodesic::evolve_geodesic(rec.H0, params, opts);

    ControlSchedule cs;
    cs.n = trace.n;
    cs.q = rec.q;
    cs.times = sol.times;
    for (const pauli::PauliString& p : pauli::enumerate_basis(trace.n)) {
        cs.labels.push_back(p.label());
        cs.penalized.push_back(p.weight >= 3);
    }
    cs.values.reserve(sol.H_samples.size());
    for (const pauli::CoeffVector& h : sol.H_samples) {
        cs.values.emplace_back(h.values.data(), h.values.data() + h.values.size());
    }
    return cs;
}

}  // namespace continuation
}  // namespace qgeo
