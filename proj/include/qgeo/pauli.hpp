#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace qgeo {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;

namespace pauli {

constexpr int kMaxQubits = 6;

// One word over {I,X,Y,Z}. Site 0 is the leftmost (most significant) tensor
// factor; `code` is the base-4 integer with digit map I=0, X=1, Y=2, Z=3 and
// site 0 as the most significant digit. The all-identity word (code 0) is not
// part of the traceless basis.
struct PauliString {
    int n = 0;
    std::vector<std::uint8_t> symbols;  // per site, 0..3
    int weight = 0;
    std::int64_t code = 0;

    std::string label() const;  // appendix notation, e.g. "1XZ"
};

struct PenaltyParams {
    int n = 1;
    double q = 1.0;  // >= 1
};

// Real coefficients over the traceless Pauli basis: H = sum_i values[i] * sigma_{i+1}
// (entry i corresponds to basis code i+1, canonical order).
struct CoeffVector {
    int n = 0;
    Eigen::VectorXd values;

    static CoeffVector zero(int n);
};

std::int64_t basis_size(int n);  // 4^n - 1

int weight_of_code(int n, std::int64_t code);
PauliString string_from_code(int n, std::int64_t code);

// All 4^n - 1 traceless basis strings in canonical order (I..IX first, Z..ZZ last).
std::vector<PauliString> enumerate_basis(int n);

CMat pauli_matrix(const PauliString& p);

// Projection onto the traceless Pauli basis. Requires H Hermitian and traceless
// within 1e-10; imaginary residues above 1e-10 are an error.
CoeffVector decompose(const CMat& H);
CMat reconstruct(const CoeffVector& v);

// Weight projectors: P keeps weight <= 2, Q keeps weight >= 3. G = P + q Q,
// F = P + Q/q.
CoeffVector apply_P(const CoeffVector& v);
CoeffVector apply_Q(const CoeffVector& v);
CoeffVector apply_G(const CoeffVector& v, const PenaltyParams& params);
CoeffVector apply_F(const CoeffVector& v, const PenaltyParams& params);

CMat apply_P(const CMat& H);
CMat apply_Q(const CMat& H);
CMat apply_G(const CMat& H, const PenaltyParams& params);
CMat apply_F(const CMat& H, const PenaltyParams& params);

// <H,J> = (1/2^n) tr(H G(J)) = sum_i g(i) V^i(H) V^i(J), with g(i) = 1 for
// weight <= 2 and q otherwise.
double metric_inner(const CoeffVector& a, const CoeffVector& b, const PenaltyParams& params);
double metric_inner(const CMat& a, const CMat& b, const PenaltyParams& params);

// Penalty factor of one basis string.
double g_of(int weight, double q);

}  // namespace pauli
}  // namespace qgeo
