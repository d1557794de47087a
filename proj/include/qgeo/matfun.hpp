#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qgeo {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;

namespace matfun {

bool is_unitary(const CMat& U, double tol = 1e-10);
bool is_hermitian(const CMat& H, double tol = 1e-10);

// Number of qubits of a 2^n x 2^n matrix; throws on non-power-of-two shapes.
int qubits_of(const CMat& M);

// H = (i/T) log U with every eigenphase of U placed in (-pi, pi]. Phases
// within 1e-10 of the branch cut are snapped to +pi so that a degenerate -1
// eigenvalue cannot straddle the cut (a straddled pair makes the q=1 Jacobi
// propagator singular). Guarantees exp(-iHT) = U within 2e-8 in max norm.
CMat principal_hamiltonian(const CMat& U, double T = 1.0);

// H - (tr H / 2^n) I.
CMat remove_trace(const CMat& H);

// U / det(U)^(1/2^n), principal root.
CMat rephase_to_su(const CMat& U);

// exp(-i H t) via eigendecomposition of Hermitian H.
CMat expm_hermitian(const CMat& H, double t);

// exp(M) for a general square complex matrix (scaling-and-squaring Pade).
CMat expm_general(const CMat& M);

// sqrt((1/4^n) tr((U-V)^dag (U-V)))
double rms_distance(const CMat& U, const CMat& V);

// min over global phases of rms_distance(U, e^{i phi} V).
double phase_invariant_distance(const CMat& U, const CMat& V);

}  // namespace matfun
}  // namespace qgeo
