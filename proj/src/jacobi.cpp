#include "qgeo/jacobi.hpp"

#include "qgeo/errors.hpp"
#include "qgeo/matfun.hpp"
#include "qgeo/threading.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace qgeo {
namespace jacobi {

namespace {

Eigen::Map<const Eigen::VectorXcd> vec_of(const CMat& M) {
    return {M.data(), M.size()};
}

CMat unvec(const Eigen::VectorXcd& v, Eigen::Index dim) {
    return Eigen::Map<const CMat>(v.data(), dim, dim);
}

// q-independent pieces of F and G: projectors onto the vectorized weight<=2
// (identity included) and weight>=3 subspaces. Cached per qubit count.
struct WeightProjectors {
    CMat low;   // sum over weight <= 2 of vec(sigma) vec(sigma)^dag / 2^n
    CMat high;  // same over weight >= 3
};

const WeightProjectors& weight_projectors(int n) {
    static std::map<int, WeightProjectors> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    const Eigen::Index dim = Eigen::Index{1} << n;
    const Eigen::Index flat = dim * dim;
    WeightProjectors wp;
    wp.low = CMat::Zero(flat, flat);
    wp.high = CMat::Zero(flat, flat);
    const double norm = 1.0 / static_cast<double>(dim);
    const std::int64_t m = pauli::basis_size(n);
    for (std::int64_t code = 0; code <= m; ++code) {
        const CMat sigma =
            code == 0 ? CMat(CMat::Identity(dim, dim)) : pauli::pauli_matrix(pauli::string_from_code(n, code));
        const Eigen::VectorXcd v = vec_of(sigma);
        CMat& dst = pauli::weight_of_code(n, code) <= 2 ? wp.low : wp.high;
        dst.noalias() += norm * v * v.adjoint();
    }
    return cache.emplace(n, std::move(wp)).first->second;
}

}  // namespace

std::pair<FlatSuperOp, FlatSuperOp> build_flat_FG(const pauli::PenaltyParams& params) {
    if (params.n > pauli::kMaxQubits) {
        throw InputError("build_flat_FG: refusing n > " + std::to_string(pauli::kMaxQubits));
    }
    if (!(params.q >= 1.0)) throw InputError("build_flat_FG: q must be >= 1");
    const WeightProjectors& wp = weight_projectors(params.n);
    FlatSuperOp F{params.n, wp.low + (1.0 / params.q) * wp.high};
    FlatSuperOp G{params.n, wp.low + params.q * wp.high};
    return {std::move(F), std::move(G)};
}

CMat build_A(const pauli::CoeffVector& H, const pauli::PenaltyParams& params,
             const FlatSuperOp& F, const FlatSuperOp& G) {
    const Eigen::Index dim = Eigen::Index{1} << params.n;
    const CMat H_mat = pauli::reconstruct(H);
    const CMat L_mat = pauli::reconstruct(pauli::apply_G(H, params));
    const CMat I = CMat::Identity(dim, dim);

    const auto kron = [](const CMat& a, const CMat& b) {
        CMat out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            }
        }
        return out;
    };

    CMat inner = kron(I, L_mat) - kron(L_mat.transpose(), I);
    inner.noalias() += (kron(H_mat.transpose(), I) - kron(I, H_mat)) * G.matrix;
    return F.matrix * inner;
}

CMat build_A(const pauli::CoeffVector& H, const pauli::PenaltyParams& params) {
    const auto [F, G] = build_flat_FG(params);
    return build_A(H, params, F, G);
}

std::vector<CMat> k_propagator(const std::vector<CMat>& A_samples,
                               const std::vector<double>& times) {
    if (A_samples.size() != times.size() || times.size() < 2) {
        throw InputError("k_propagator: need matching A and time samples");
    }
    const std::size_t nt = times.size();
    const double dt = times[1] - times[0];
    for (std::size_t j = 1; j + 1 < nt; ++j) {
        if (std::abs((times[j + 1] - times[j]) - dt) > 1e-12) {
            throw InputError("k_propagator: time grid must be uniform");
        }
    }

    std::vector<CMat> factors(nt - 1);
    threading::parallel_for(nt - 1, [&](std::size_t j) {
        const CMat mid = 0.5 * (A_samples[j] + A_samples[j + 1]);
        factors[j] = matfun::expm_general(Complex(0.0, dt) * mid);
    });

    std::vector<CMat> K(nt);
    K[0] = CMat::Identity(A_samples[0].rows(), A_samples[0].cols());
    for (std::size_t j = 0; j + 1 < nt; ++j) K[j + 1] = factors[j] * K[j];
    return K;
}

namespace {

// (U^T (x) U^dag) K, assembled column-wise as vec(U^dag unvec(K col) U); this
// costs 2 dim^5 instead of the dim^6 of a dense flat product.
void conjugate_term(const CMat& U, const CMat& K, CMat& out) {
    const Eigen::Index dim = U.rows();
    const Eigen::Index flat = dim * dim;
    const CMat Ud = U.adjoint();
    for (Eigen::Index c = 0; c < flat; ++c) {
        const Eigen::Map<const CMat> X(K.data() + c * flat, dim, dim);
        const CMat conj = Ud * X * U;
        out.col(c) = Eigen::Map<const Eigen::VectorXcd>(conj.data(), flat);
    }
}

}  // namespace

JacobiPropagator jacobi_propagator(const geodesic::GeodesicSolution& solution,
                                   const pauli::PenaltyParams& params) {
    const std::size_t nt = solution.times.size();
    if (nt < 2) throw InputError("jacobi_propagator: need at least two samples");
    const Eigen::Index dim = Eigen::Index{1} << params.n;
    const Eigen::Index flat = dim * dim;
    const double dt = solution.times[1] - solution.times[0];
    for (std::size_t j = 1; j + 1 < nt; ++j) {
        if (std::abs((solution.times[j + 1] - solution.times[j]) - dt) > 1e-12) {
            throw InputError("jacobi_propagator: time grid must be uniform");
        }
    }

    const auto [F, G] = build_flat_FG(params);

    // Stream through the grid in chunks so n = 4 stays within a few tens of MB;
    // the left-fold and the trapezoid accumulation remain strictly sequential.
    constexpr std::size_t chunk = 16;
    JacobiPropagator JP;
    JP.n = params.n;
    JP.T = solution.T;
    JP.tensor = CMat::Zero(flat, flat);

    CMat K_cur = CMat::Identity(flat, flat);
    CMat term(flat, flat);
    conjugate_term(solution.U_samples[0], K_cur, term);
    JP.tensor.noalias() += (0.5 * dt) * term;

    CMat A_right = build_A(solution.H_samples[0], params, F, G);
    std::vector<CMat> factors(chunk);
    for (std::size_t base = 0; base + 1 < nt; base += chunk) {
        const std::size_t count = std::min(chunk, nt - 1 - base);
        std::vector<CMat> A_chunk(count + 1);
        A_chunk[0] = std::move(A_right);
        threading::parallel_for(count, [&](std::size_t i) {
            A_chunk[i + 1] = build_A(solution.H_samples[base + i + 1], params, F, G);
        });
        threading::parallel_for(count, [&](std::size_t i) {
            const CMat mid = 0.5 * (A_chunk[i] + A_chunk[i + 1]);
            factors[i] = matfun::expm_general(Complex(0.0, dt) * mid);
        });
        A_right = std::move(A_chunk[count]);

        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = base + i + 1;
            K_cur = (factors[i] * K_cur).eval();
            conjugate_term(solution.U_samples[j], K_cur, term);
            const double w = (j + 1 == nt) ? 0.5 * dt : dt;
            JP.tensor.noalias() += w * term;
        }
    }

    Eigen::PartialPivLU<CMat> lu(JP.tensor);
    const double rc = lu.rcond();
    JP.condition_estimate =
        (rc > 0.0 && std::isfinite(rc)) ? 1.0 / rc : std::numeric_limits<double>::infinity();
    return JP;
}

CMat invert_jacobi(const JacobiPropagator& JP) {
    if (!(JP.condition_estimate < 1e12)) {
        throw NumericalError(
            "invert_jacobi: propagator ill-conditioned (estimate " +
            std::to_string(JP.condition_estimate) + "), likely near a conjugate point");
    }
    return JP.tensor.partialPivLu().inverse();
}

namespace {

bool q_part_vanishes(const pauli::CoeffVector& H) {
    const std::int64_t m = pauli::basis_size(H.n);
    for (std::int64_t code = 1; code <= m; ++code) {
        if (pauli::weight_of_code(H.n, code) >= 3 && H.values[code - 1] != 0.0) return false;
    }
    return true;
}

pauli::CoeffVector project_real_traceless(const CMat& M, int n) {
    const double herm_res = (M - M.adjoint()).cwiseAbs().maxCoeff();
    const double trace_res = std::abs(M.trace()) / static_cast<double>(M.rows());
    if (herm_res > 1e-8 || trace_res > 1e-8) {
        throw NumericalError("dH0_dq: discarded residue too large (hermitian " +
                             std::to_string(herm_res) + ", trace " + std::to_string(trace_res) + ")");
    }
    const CMat sym = matfun::remove_trace(Complex(0.5, 0.0) * (M + M.adjoint()));
    return pauli::decompose(sym);
}

}  // namespace

pauli::CoeffVector dH0_dq(const pauli::CoeffVector& H0, const pauli::PenaltyParams& params,
                          const geodesic::GeodesicSolution& solution, const CMat& JP_inv) {
    if (q_part_vanishes(H0)) return pauli::CoeffVector::zero(H0.n);

    const Eigen::Index dim = Eigen::Index{1} << params.n;
    const std::size_t nt = solution.times.size();
    const double dt = solution.times[1] - solution.times[0];

    if (params.q == 1.0) {
        const CMat P = pauli::reconstruct(pauli::apply_P(H0));
        const CMat Q = pauli::reconstruct(pauli::apply_Q(H0));
        const CMat comm = Complex(0.0, 1.0) * (P * Q - Q * P);
        CMat R = CMat::Zero(dim, dim);
        for (std::size_t j = 0; j < nt; ++j) {
            const double w = (j == 0 || j + 1 == nt) ? 0.5 * dt : dt;
            const CMat& U = solution.U_samples[j];
            R.noalias() += (w * solution.times[j]) * (U.adjoint() * comm * U);
        }
        const Eigen::VectorXcd x = JP_inv * Eigen::Map<const Eigen::VectorXcd>(R.data(), dim * dim);
        return project_real_traceless(unvec(x, dim), params.n);
    }

    const CMat L0 = pauli::reconstruct(pauli::apply_G(H0, params));
    const Eigen::VectorXcd x = JP_inv * Eigen::Map<const Eigen::VectorXcd>(L0.data(), dim * dim);
    const CMat M = (unvec(x, dim) * solution.T - L0) / (params.q * (params.q - 1.0));
    return project_real_traceless(M, params.n);
}

double christoffel(const pauli::PauliString& a, const pauli::PauliString& b,
                   const pauli::PauliString& d, const pauli::PenaltyParams& params) {
    if (a.n != params.n || b.n != params.n || d.n != params.n) {
        throw InputError("christoffel: qubit count mismatch");
    }
    const double ga = pauli::g_of(a.weight, params.q);
    const double gb = pauli::g_of(b.weight, params.q);
    const double fd = 1.0 / pauli::g_of(d.weight, params.q);
    const CMat sa = pauli::pauli_matrix(a);
    const CMat sb = pauli::pauli_matrix(b);
    const CMat sd = pauli::pauli_matrix(d);

    const CMat bracket = gb * (sa * sb - sb * sa) + ga * (sb * sa - sa * sb);
    const Complex tr = (sd * bracket).trace();
    const Complex gamma = Complex(0.0, 1.0) * fd * tr /
                          static_cast<double>(Eigen::Index{2} << params.n);
    if (std::abs(gamma.imag()) > 1e-10) {
        throw NumericalError("christoffel: non-real result");
    }
    return gamma.real();
}

}  // namespace jacobi
}  // namespace qgeo
