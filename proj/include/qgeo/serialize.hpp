#pragma once

#include "qgeo/continuation.hpp"
#include "qgeo/geodesic.hpp"
#include "qgeo/matfun.hpp"
#include "qgeo/pauli.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qgeo {
namespace serialize {

// Shared matrix form: {"n": int, "matrix": [[[re,im],...],...]}, row-major.
std::string unitary_to_json(const CMat& U);
CMat unitary_from_json(const std::string& bytes);

// {"n": int, "coeffs": [float,...]} in canonical basis order.
std::string coeffs_to_json(const pauli::CoeffVector& v);
pauli::CoeffVector coeffs_from_json(const std::string& bytes);

std::string solution_to_json(const geodesic::GeodesicSolution& sol, bool include_U = false);

std::string trace_to_json(const continuation::ContinuationTrace& trace);
continuation::ContinuationTrace trace_from_json(const std::string& bytes);

// FNV-1a 64 over the canonical unitary JSON bytes, as 16 hex digits.
std::uint64_t fnv1a64(const std::string& bytes);
std::string target_hash(const CMat& rephased_target);

std::string control_schedule_csv(const continuation::ControlSchedule& cs);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace serialize
}  // namespace qgeo
