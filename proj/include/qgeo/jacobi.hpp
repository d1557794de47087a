#pragma once

#include "qgeo/geodesic.hpp"
#include "qgeo/pauli.hpp"

#include <utility>
#include <vector>

namespace qgeo {
namespace jacobi {

// Matrix acting on column-vectorized 2^n x 2^n operators, i.e. on vec(X) with
// (M (x) N) vec(X) = vec(N X M^T). This convention is fixed repo-wide; with
// Eigen's column-major storage vec(X) is just X's flat data.
struct FlatSuperOp {
    int n = 0;
    CMat matrix;
};

struct JacobiPropagator {
    int n = 0;
    double T = 1.0;
    CMat tensor;
    double condition_estimate = 0.0;
};

// Flattened representations of F and G: diagonal on vectorized Pauli strings
// with eigenvalues 1/g(beta) and g(beta), identity included with g = 1.
std::pair<FlatSuperOp, FlatSuperOp> build_flat_FG(const pauli::PenaltyParams& params);

// A = F [ (I (x) L - L^T (x) I) + (H^T (x) I - I (x) H) G ] with L = G(H);
// applied to vec(K) this is vec(-F([K, G(H)] + [H, G(K)])), the homogeneous
// generator of the lifted Jacobi flow (K' = i A K).
CMat build_A(const pauli::CoeffVector& H, const pauli::PenaltyParams& params,
             const FlatSuperOp& F, const FlatSuperOp& G);
CMat build_A(const pauli::CoeffVector& H, const pauli::PenaltyParams& params);

// Ordered product K_{t_{j+1}} = exp(i dt A(t_mid)) K_{t_j} with midpoint A from
// averaged adjacent samples; K_{t_0} = I.
std::vector<CMat> k_propagator(const std::vector<CMat>& A_samples,
                               const std::vector<double>& times);

// J_T = integral over t of (U^T (x) U^dag) K_t, trapezoid over the solution's
// sample grid.
JacobiPropagator jacobi_propagator(const geodesic::GeodesicSolution& solution,
                                   const pauli::PenaltyParams& params);

// Pivoted-LU inverse; throws when condition_estimate exceeds 1e12
// (conjugate-point signal).
CMat invert_jacobi(const JacobiPropagator& JP);

// Right-hand side of the continuation: the q = 1 branch integrates
// U^dag (i t [P(H),Q(H)]) U, the q > 1 branch is (J_T^{-1}(L0) T - L0)/(q(q-1))
// with L0 = G(H0). Residues discarded by the real/traceless projection must
// stay below 1e-8.
pauli::CoeffVector dH0_dq(const pauli::CoeffVector& H0, const pauli::PenaltyParams& params,
                          const geodesic::GeodesicSolution& solution, const CMat& JP_inv);

// Christoffel symbol of the penalty metric,
// Gamma^d_{ab} = (i/2^{n+1}) tr(F(sigma_d) ([sigma_a, G(sigma_b)] + [sigma_b, G(sigma_a)])).
double christoffel(const pauli::PauliString& a, const pauli::PauliString& b,
                   const pauli::PauliString& d, const pauli::PenaltyParams& params);

}  // namespace jacobi
}  // namespace qgeo
