#pragma once

#include "qgeo/geodesic.hpp"
#include "qgeo/pauli.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qgeo {
namespace continuation {

struct ContinuationConfig {
    double q_max = 0.0;  // 0 selects 4^n - 1 once the target is known
    int N_t = 201;
    int record_count = 60;  // log-spaced in q
    double geo_rtol = 1e-8;
    double geo_atol = 1e-10;
    double cont_rtol = 1e-6;
    double cont_atol = 1e-9;
    double abort_boundary_error = 5e-2;  // phase-invariant
};

struct ContinuationRecord {
    double q = 1.0;
    pauli::CoeffVector H0;
    double complexity = 0.0;
    double boundary_error_raw = 0.0;
    double boundary_error_phase_invariant = 0.0;
};

// Sweep state carried by checkpoints; a resumed run reproduces the
// uninterrupted step sequence exactly.
struct IntegratorState {
    std::size_t next_record = 0;
    double q = 1.0;
    pauli::CoeffVector H0;
    double step_size = 0.0;  // in s = ln q
};

struct ContinuationTrace {
    std::string target_id;  // content hash of the rephased target
    int n = 1;
    CMat target;            // rephased target unitary
    ContinuationConfig config;
    std::vector<double> q_values;  // full planned grid
    std::vector<ContinuationRecord> records;
    std::optional<IntegratorState> state;  // present while incomplete

    bool complete() const { return records.size() == q_values.size(); }
};

struct ControlSchedule {
    int n = 1;
    double q = 1.0;
    std::vector<double> times;
    std::vector<std::string> labels;     // canonical basis order
    std::vector<bool> penalized;         // weight >= 3
    std::vector<std::vector<double>> values;  // [time][basis]
};

// Rephase to SU, take the principal log at T = 1, drop the trace, decompose.
pauli::CoeffVector initialize_base(const CMat& U_T);

using RecordCallback = std::function<void(const ContinuationTrace&, const ContinuationRecord&)>;
using StopFlag = std::function<bool()>;

// Drives H0(q) from q = 1 to q_max by integrating dH0/dq in s = ln q,
// recording the geodesic at each grid value. on_record fires after each
// completed record (checkpointing hook); should_stop is polled between ODE
// stages and returns a paused trace (state set) when it trips.
ContinuationTrace run_continuation(const CMat& U_T, const ContinuationConfig& config,
                                   const RecordCallback& on_record = nullptr,
                                   const StopFlag& should_stop = nullptr);

// Continues a paused trace to completion.
ContinuationTrace resume_continuation(ContinuationTrace trace,
                                      const RecordCallback& on_record = nullptr,
                                      const StopFlag& should_stop = nullptr);

void checkpoint(const ContinuationTrace& trace, const std::string& path);
ContinuationTrace resume(const std::string& path);

// Re-evolves the geodesic at the recorded H0(q); q must match a record (or
// pass q < 0 for the final one).
ControlSchedule export_controls(const ContinuationTrace& trace, double q, int N_t = 0);

const ContinuationRecord& record_at(const ContinuationTrace& trace, double q);

}  // namespace continuation
}  // namespace qgeo
