#include "qgeo/geodesic.hpp"

#include "qgeo/errors.hpp"
#include "qgeo/matfun.hpp"
#include "qgeo/ode.hpp"

#include <cmath>
#include <numbers>

namespace qgeo {
namespace geodesic {

namespace {

bool q_part_vanishes(const pauli::CoeffVector& H) {
    const std::int64_t m = pauli::basis_size(H.n);
    for (std::int64_t code = 1; code <= m; ++code) {
        if (pauli::weight_of_code(H.n, code) >= 3 && H.values[code - 1] != 0.0) return false;
    }
    return true;
}

}  // namespace

void geodesic_rhs(const pauli::CoeffVector& H, const CMat& U, const pauli::PenaltyParams& params,
                  CMat& dU, pauli::CoeffVector& dH) {
    const CMat H_mat = pauli::reconstruct(H);
    dU.noalias() = Complex(0.0, -1.0) * (H_mat * U);

    // G is the identity when q = 1 or no weight-3 component exists, and then
    // [H, G(H)] = 0 identically.
    if (params.q == 1.0 || params.n <= 2 || q_part_vanishes(H)) {
        dH = pauli::CoeffVector::zero(H.n);
        return;
    }
    const CMat L_mat = pauli::reconstruct(pauli::apply_G(H, params));
    const CMat comm = H_mat * L_mat - L_mat * H_mat;
    dH = pauli::apply_F(pauli::decompose(Complex(0.0, -1.0) * comm), params);
}

GeodesicSolution evolve_geodesic(const pauli::CoeffVector& H0, const pauli::PenaltyParams& params,
                                 const EvolveOptions& opts, const CMat* target) {
    if (H0.n != params.n) throw InputError("evolve_geodesic: qubit count mismatch");
    if (opts.N_t < 2) throw InputError("evolve_geodesic: N_t must be at least 2");
    const Eigen::Index dim = Eigen::Index{1} << params.n;
    const std::int64_t m = pauli::basis_size(params.n);
    const std::size_t u_doubles = static_cast<std::size_t>(2 * dim * dim);

    std::vector<double> y(u_doubles + static_cast<std::size_t>(m), 0.0);
    {
        Eigen::Map<CMat> U(reinterpret_cast<Complex*>(y.data()), dim, dim);
        U.setIdentity();
        Eigen::Map<Eigen::VectorXd>(y.data() + u_doubles, m) = H0.values;
    }

    pauli::CoeffVector h_state = pauli::CoeffVector::zero(params.n);
    CMat du(dim, dim);
    pauli::CoeffVector dh;
    auto rhs = [&](double, const std::vector<double>& state, std::vector<double>& dstate) {
        Eigen::Map<const CMat> U(reinterpret_cast<const Complex*>(state.data()), dim, dim);
        h_state.values = Eigen::Map<const Eigen::VectorXd>(state.data() + u_doubles, m);
        geodesic_rhs(h_state, CMat(U), params, du, dh);
        Eigen::Map<CMat>(reinterpret_cast<Complex*>(dstate.data()), dim, dim) = du;
        Eigen::Map<Eigen::VectorXd>(dstate.data() + u_doubles, m) = dh.values;
    };

    GeodesicSolution sol;
    sol.params = params;
    sol.T = 1.0;
    sol.times.resize(static_cast<std::size_t>(opts.N_t));
    for (int k = 0; k < opts.N_t; ++k) {
        sol.times[static_cast<std::size_t>(k)] = static_cast<double>(k) / (opts.N_t - 1);
    }
    sol.H_samples.resize(sol.times.size());
    sol.U_samples.resize(sol.times.size());

    ode::Options oopt;
    oopt.rtol = opts.rtol;
    oopt.atol = opts.atol;
    ode::integrate(
        rhs, 0.0, 1.0, y, oopt, sol.times,
        [&](std::size_t idx, double, const std::vector<double>& state) {
            sol.U_samples[idx] =
                Eigen::Map<const CMat>(reinterpret_cast<const Complex*>(state.data()), dim, dim);
            pauli::CoeffVector v = pauli::CoeffVector::zero(params.n);
            v.values = Eigen::Map<const Eigen::VectorXd>(state.data() + u_doubles, m);
            sol.H_samples[idx] = std::move(v);
        });

    double drift = 0.0;
    const CMat I = CMat::Identity(dim, dim);
    for (const CMat& U : sol.U_samples) {
        drift = std::max(drift, (U.adjoint() * U - I).cwiseAbs().maxCoeff());
    }
    if (drift > opts.unitarity_tol) {
        throw NumericalError("evolve_geodesic: unitarity drift " + std::to_string(drift) +
                             " exceeds tolerance");
    }

    sol.complexity = complexity_of(sol);
    if (target) {
        const CMat& Ufinal = sol.U_samples.back();
        sol.boundary_error_raw = matfun::rms_distance(Ufinal, *target);
        sol.boundary_error = matfun::phase_invariant_distance(Ufinal, *target);
    }
    return sol;
}

double complexity_of(const GeodesicSolution& solution) {
    if (solution.times.size() < 2) throw InputError("complexity_of: too few samples");
    const std::size_t nt = solution.times.size();
    double integral = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
        const double speed = std::sqrt(std::max(
            0.0, pauli::metric_inner(solution.H_samples[k], solution.H_samples[k], solution.params)));
        if (k > 0) {
            integral += 0.5 * (speed + prev) * (solution.times[k] - solution.times[k - 1]);
        }
        prev = speed;
    }
    const double const_speed =
        std::sqrt(std::max(0.0, pauli::metric_inner(solution.H_samples.front(),
                                                    solution.H_samples.front(), solution.params))) *
        solution.T;
    const double scale = std::max(const_speed, 1e-12);
    if (std::abs(integral - const_speed) / scale > 1e-4) {
        throw NumericalError("complexity_of: speed conservation violated (trapezoid " +
                             std::to_string(integral) + " vs constant-speed " +
                             std::to_string(const_speed) + ")");
    }
    return integral;
}

double straight_line_complexity(const CMat& U_T, const pauli::PenaltyParams& params) {
    const CMat su = matfun::rephase_to_su(U_T);
    const CMat H0 = matfun::remove_trace(matfun::principal_hamiltonian(su, 1.0));
    const pauli::CoeffVector v = pauli::decompose(H0);
    return std::sqrt(std::max(0.0, pauli::metric_inner(v, v, params)));
}

AnalyticCase analytic_case_from_name(const std::string& name) {
    if (name == "qft1") return AnalyticCase::qft1;
    if (name == "qft2") return AnalyticCase::qft2;
    if (name == "cnot") return AnalyticCase::cnot;
    throw InputError("unknown analytic case: " + name);
}

double analytic_reference(AnalyticCase which) {
    constexpr double pi = std::numbers::pi;
    switch (which) {
        case AnalyticCase::qft1: return pi / (2.0 * std::numbers::sqrt2);
        case AnalyticCase::qft2: return std::sqrt(11.0) * pi / 16.0;
        case AnalyticCase::cnot: return std::sqrt(3.0) * pi / 4.0;
    }
    throw InputError("unknown analytic case");
}

}  // namespace geodesic
}  // namespace qgeo
