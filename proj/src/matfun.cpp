#include "qgeo/matfun.hpp"

#include "qgeo/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace qgeo {
namespace matfun {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kReconstructTol = 2e-8;
constexpr double kCutSnapTol = 1e-10;

void require_unitary(const CMat& U, const char* who) {
    if (U.rows() != U.cols()) throw InputError(std::string(who) + ": matrix not square");
    if (!is_unitary(U)) throw InputError(std::string(who) + ": matrix not unitary within 1e-10");
}

}  // namespace

bool is_unitary(const CMat& U, double tol) {
    if (U.rows() != U.cols()) return false;
    const CMat I = CMat::Identity(U.rows(), U.cols());
    return (U.adjoint() * U - I).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const CMat& H, double tol) {
    if (H.rows() != H.cols()) return false;
    return (H - H.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

int qubits_of(const CMat& M) {
    const Eigen::Index dim = M.rows();
    if (dim != M.cols() || dim < 2 || (dim & (dim - 1)) != 0) {
        throw InputError("matrix dimension is not a power of two");
    }
    int n = 0;
    for (Eigen::Index d = dim; d > 1; d >>= 1) ++n;
    return n;
}

CMat principal_hamiltonian(const CMat& U, double T) {
    require_unitary(U, "principal_hamiltonian");
    if (!(T > 0.0)) throw InputError("principal_hamiltonian: T must be positive");

    // U is normal, so its Schur form is diagonal up to roundoff and the Schur
    // basis is unitary; this keeps H Hermitian even for degenerate clusters.
    Eigen::ComplexSchur<CMat> schur(U);
    if (schur.info() != Eigen::Success) {
        throw NumericalError("principal_hamiltonian: Schur decomposition failed");
    }
    const CMat& Q = schur.matrixU();
    const Eigen::Index dim = U.rows();

    Eigen::VectorXd phases(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        double theta = std::arg(schur.matrixT()(k, k));
        if (std::numbers::pi - std::abs(theta) < kCutSnapTol) theta = std::numbers::pi;
        phases[k] = theta;
    }

    CMat H = Q * (-phases / T).asDiagonal() * Q.adjoint();
    H = (Complex(0.5, 0.0) * (H + H.adjoint())).eval();

    const CMat back = expm_hermitian(H, T);
    const double err = (back - U).cwiseAbs().maxCoeff();
    if (err > kReconstructTol) {
        throw NumericalError("principal_hamiltonian: exp(-iHT) fails to reproduce U, error " +
                             std::to_string(err));
    }
    return H;
}

CMat remove_trace(const CMat& H) {
    if (H.rows() != H.cols()) throw InputError("remove_trace: matrix not square");
    const Complex shift = H.trace() / static_cast<double>(H.rows());
    return H - shift * CMat::Identity(H.rows(), H.cols());
}

CMat rephase_to_su(const CMat& U) {
    require_unitary(U, "rephase_to_su");
    const int n = qubits_of(U);
    const Complex det = U.determinant();
    const double phi = std::arg(det) / static_cast<double>(Eigen::Index{1} << n);
    return U * std::polar(1.0, -phi);
}

CMat expm_hermitian(const CMat& H, double t) {
    if (!is_hermitian(H, 1e-8)) throw InputError("expm_hermitian: matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    if (es.info() != Eigen::Success) {
        throw NumericalError("expm_hermitian: eigendecomposition failed");
    }
    const Eigen::VectorXd& w = es.eigenvalues();
    Eigen::VectorXcd ph(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) ph[k] = std::polar(1.0, -w[k] * t);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

CMat expm_general(const CMat& M) {
    if (M.rows() != M.cols()) throw InputError("expm_general: matrix not square");
    return M.exp();
}

double rms_distance(const CMat& U, const CMat& V) {
    if (U.rows() != V.rows() || U.cols() != V.cols()) {
        throw InputError("rms_distance: dimension mismatch");
    }
    const double dim = static_cast<double>(U.rows());
    return (U - V).norm() / dim;
}

double phase_invariant_distance(const CMat& U, const CMat& V) {
    if (U.rows() != V.rows() || U.cols() != V.cols()) {
        throw InputError("phase_invariant_distance: dimension mismatch");
    }
    const double dim = static_cast<double>(U.rows());
    const double overlap = std::abs((V.adjoint() * U).trace());
    const double sq = std::max(0.0, 2.0 * dim - 2.0 * overlap);
    return std::sqrt(sq) / dim;
}

}  // namespace matfun
}  // namespace qgeo
