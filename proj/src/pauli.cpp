#include "qgeo/pauli.hpp"

#include "qgeo/errors.hpp"

#include <bit>
#include <cmath>

namespace qgeo {
namespace pauli {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;

// Bit masks of a string: bx marks sites with X or Y, bz marks sites with Z or
// Y, so sigma = i^{#Y} X^{bx} Z^{bz} and the only nonzero entries are
// sigma[c ^ bx, c] = i^{#Y} (-1)^{popcount(c & bz)}.
struct Masks {
    std::uint64_t bx = 0;
    std::uint64_t bz = 0;
    int ny = 0;
};

Masks masks_of(int n, std::int64_t code) {
    Masks m;
    for (int site = 0; site < n; ++site) {
        const int bit = n - 1 - site;
        const int d = static_cast<int>((code >> (2 * bit)) & 3);
        if (d == 1 || d == 2) m.bx |= (1ULL << bit);
        if (d == 3 || d == 2) m.bz |= (1ULL << bit);
        if (d == 2) ++m.ny;
    }
    return m;
}

Complex phase_i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw InputError("qubit count out of range [1," + std::to_string(kMaxQubits) +
                         "]: " + std::to_string(n));
    }
}

void check_penalty(const PenaltyParams& params) {
    check_qubit_count(params.n);
    if (!(params.q >= 1.0)) {
        throw InputError("penalty factor must be >= 1, got " + std::to_string(params.q));
    }
}

}  // namespace

std::int64_t basis_size(int n) {
    check_qubit_count(n);
    return (std::int64_t{1} << (2 * n)) - 1;
}

int weight_of_code(int n, std::int64_t code) {
    int w = 0;
    for (int site = 0; site < n; ++site) {
        if ((code >> (2 * site)) & 3) ++w;
    }
    return w;
}

std::string PauliString::label() const {
    static const char chars[] = "1XYZ";
    std::string s(static_cast<std::size_t>(n), '1');
    for (int site = 0; site < n; ++site) s[static_cast<std::size_t>(site)] = chars[symbols[site]];
    return s;
}

PauliString string_from_code(int n, std::int64_t code) {
    check_qubit_count(n);
    if (code < 0 || code > basis_size(n)) {
        throw InputError("pauli code out of range: " + std::to_string(code));
    }
    PauliString p;
    p.n = n;
    p.code = code;
    p.symbols.resize(static_cast<std::size_t>(n));
    for (int site = 0; site < n; ++site) {
        const int digit = static_cast<int>((code >> (2 * (n - 1 - site))) & 3);
        p.symbols[static_cast<std::size_t>(site)] = static_cast<std::uint8_t>(digit);
        if (digit) ++p.weight;
    }
    return p;
}

std::vector<PauliString> enumerate_basis(int n) {
    const std::int64_t m = basis_size(n);
    std::vector<PauliString> out;
    out.reserve(static_cast<std::size_t>(m));
    for (std::int64_t code = 1; code <= m; ++code) out.push_back(string_from_code(n, code));
    return out;
}

CMat pauli_matrix(const PauliString& p) {
    const Masks m = masks_of(p.n, p.code);
    const std::int64_t dim = std::int64_t{1} << p.n;
    CMat out = CMat::Zero(dim, dim);
    const Complex ph = phase_i_pow(m.ny);
    for (std::int64_t c = 0; c < dim; ++c) {
        const double sign = (std::popcount(static_cast<std::uint64_t>(c) & m.bz) & 1) ? -1.0 : 1.0;
        out(static_cast<Eigen::Index>(c ^ static_cast<std::int64_t>(m.bx)),
            static_cast<Eigen::Index>(c)) = ph * sign;
    }
    return out;
}

CoeffVector CoeffVector::zero(int n) {
    check_qubit_count(n);
    CoeffVector v;
    v.n = n;
    v.values = Eigen::VectorXd::Zero(basis_size(n));
    return v;
}

CoeffVector decompose(const CMat& H) {
    const Eigen::Index dim = H.rows();
    if (dim != H.cols() || dim < 2 || (dim & (dim - 1)) != 0) {
        throw InputError("decompose: matrix must be square with power-of-two dimension");
    }
    int n = 0;
    for (Eigen::Index d = dim; d > 1; d >>= 1) ++n;
    check_qubit_count(n);

    const double herm = (H - H.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermTol) {
        throw NumericalError("decompose: input not Hermitian, deviation " + std::to_string(herm));
    }
    const double tr = std::abs(H.trace());
    if (tr > kTraceTol) {
        throw NumericalError("decompose: input not traceless, |tr| = " + std::to_string(tr));
    }

    CoeffVector v = CoeffVector::zero(n);
    const double inv_dim = 1.0 / static_cast<double>(dim);
    const std::int64_t m = basis_size(n);
    for (std::int64_t code = 1; code <= m; ++code) {
        const Masks msk = masks_of(n, code);
        Complex acc = 0.0;
        for (std::int64_t r = 0; r < dim; ++r) {
            const double sign =
                (std::popcount(static_cast<std::uint64_t>(r) & msk.bz) & 1) ? -1.0 : 1.0;
            acc += H(static_cast<Eigen::Index>(r),
                     static_cast<Eigen::Index>(r ^ static_cast<std::int64_t>(msk.bx))) *
                   sign;
        }
        acc *= phase_i_pow(msk.ny) * inv_dim;
        if (std::abs(acc.imag()) > kHermTol) {
            throw NumericalError("decompose: coefficient has imaginary residue " +
                                 std::to_string(acc.imag()));
        }
        v.values[code - 1] = acc.real();
    }
    return v;
}

CMat reconstruct(const CoeffVector& v) {
    check_qubit_count(v.n);
    const std::int64_t dim = std::int64_t{1} << v.n;
    if (v.values.size() != basis_size(v.n)) {
        throw InputError("reconstruct: coefficient vector has wrong length");
    }
    CMat H = CMat::Zero(dim, dim);
    const std::int64_t m = basis_size(v.n);
    for (std::int64_t code = 1; code <= m; ++code) {
        const double c = v.values[code - 1];
        if (c == 0.0) continue;
        const Masks msk = masks_of(v.n, code);
        const Complex ph = phase_i_pow(msk.ny) * c;
        for (std::int64_t col = 0; col < dim; ++col) {
            const double sign =
                (std::popcount(static_cast<std::uint64_t>(col) & msk.bz) & 1) ? -1.0 : 1.0;
            H(static_cast<Eigen::Index>(col ^ static_cast<std::int64_t>(msk.bx)),
              static_cast<Eigen::Index>(col)) += ph * sign;
        }
    }
    return H;
}

double g_of(int weight, double q) { return weight <= 2 ? 1.0 : q; }

namespace {

template <typename Fn>
CoeffVector map_coeffs(const CoeffVector& v, Fn&& f) {
    CoeffVector out = v;
    const std::int64_t m = basis_size(v.n);
    for (std::int64_t code = 1; code <= m; ++code) {
        out.values[code - 1] = f(weight_of_code(v.n, code)) * v.values[code - 1];
    }
    return out;
}

}  // namespace

CoeffVector apply_P(const CoeffVector& v) {
    return map_coeffs(v, [](int w) { return w <= 2 ? 1.0 : 0.0; });
}

CoeffVector apply_Q(const CoeffVector& v) {
    return map_coeffs(v, [](int w) { return w >= 3 ? 1.0 : 0.0; });
}

CoeffVector apply_G(const CoeffVector& v, const PenaltyParams& params) {
    check_penalty(params);
    return map_coeffs(v, [&](int w) { return g_of(w, params.q); });
}

CoeffVector apply_F(const CoeffVector& v, const PenaltyParams& params) {
    check_penalty(params);
    return map_coeffs(v, [&](int w) { return 1.0 / g_of(w, params.q); });
}

CMat apply_P(const CMat& H) { return reconstruct(apply_P(decompose(H))); }
CMat apply_Q(const CMat& H) { return reconstruct(apply_Q(decompose(H))); }

CMat apply_G(const CMat& H, const PenaltyParams& params) {
    return reconstruct(apply_G(decompose(H), params));
}

CMat apply_F(const CMat& H, const PenaltyParams& params) {
    return reconstruct(apply_F(decompose(H), params));
}

double metric_inner(const CoeffVector& a, const CoeffVector& b, const PenaltyParams& params) {
    check_penalty(params);
    if (a.n != b.n || a.n != params.n) {
        throw InputError("metric_inner: dimension mismatch");
    }
    double acc = 0.0;
    const std::int64_t m = basis_size(a.n);
    for (std::int64_t code = 1; code <= m; ++code) {
        acc += g_of(weight_of_code(a.n, code), params.q) * a.values[code - 1] * b.values[code - 1];
    }
    return acc;
}

double metric_inner(const CMat& a, const CMat& b, const PenaltyParams& params) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InputError("metric_inner: dimension mismatch");
    }
    return metric_inner(decompose(a), decompose(b), params);
}

}  // namespace pauli
}  // namespace qgeo
