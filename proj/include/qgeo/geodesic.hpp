#pragma once

#include "qgeo/pauli.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qgeo {
namespace geodesic {

// One solved geodesic, sampled on a uniform grid over [0,1]. boundary_error is
// the phase-invariant rms distance from U(1) to the target (when a target was
// supplied); boundary_error_raw is the plain rms distance.
struct GeodesicSolution {
    pauli::PenaltyParams params;
    double T = 1.0;
    std::vector<double> times;
    std::vector<pauli::CoeffVector> H_samples;
    std::vector<CMat> U_samples;
    double complexity = 0.0;
    double boundary_error = 0.0;
    double boundary_error_raw = 0.0;
};

struct EvolveOptions {
    int N_t = 201;
    double rtol = 1e-8;
    double atol = 1e-10;
    double unitarity_tol = 1e-6;
};

// dU = -i H U, dH = -i F([H, G(H)]) expressed back in coefficients.
void geodesic_rhs(const pauli::CoeffVector& H, const CMat& U, const pauli::PenaltyParams& params,
                  CMat& dU, pauli::CoeffVector& dH);

// Integrates the coupled system from U(0) = I with H(0) = H0. Unitarity drift
// beyond unitarity_tol is fatal; no re-unitarization is applied.
GeodesicSolution evolve_geodesic(const pauli::CoeffVector& H0, const pauli::PenaltyParams& params,
                                 const EvolveOptions& opts = {},
                                 const CMat* target = nullptr);

// Path length by trapezoid over the samples. Errors if the sampled speed
// disagrees with the constant-speed value by more than 1e-4 relative.
double complexity_of(const GeodesicSolution& solution);

// sqrt(<H0, H0>_q) for H0 = detraced principal log of the SU-rephased target.
// Exact for n <= 2; an upper-bound reference otherwise.
double straight_line_complexity(const CMat& U_T, const pauli::PenaltyParams& params);

enum class AnalyticCase { qft1, qft2, cnot };
AnalyticCase analytic_case_from_name(const std::string& name);
double analytic_reference(AnalyticCase which);

}  // namespace geodesic
}  // namespace qgeo
