// linalg.hpp: small dense complex linear algebra (dimension 2..8)
//
// Hermitian and unitary eigendecompositions and the propagator exponential
// exp(-i s h) for Hermitian generators. Matrices carry a compile-time
// maximum size so no heap allocation happens in the inner integrator loops.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <utility>
#include <string>

#include "ktuple/errors.hpp"

namespace ktuple::linalg {

using cplx = std::complex<double>;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 8;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using ComplexMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using StateVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using RealVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Vec3 = Eigen::Vector3d;

inline constexpr cplx kI{0.0, 1.0};

// ------------------------------------------------------------------ checks

inline double max_abs(const ComplexMatrix& m) {
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

inline void require_valid(const ComplexMatrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() < kMinDim || m.rows() > kMaxDim) {
        throw ContractViolation(std::string(who) + ": matrix must be square with dimension in [2, 8]");
    }
    if (!m.allFinite()) {
        throw ContractViolation(std::string(who) + ": matrix has non-finite entries");
    }
}

// Largest entry of m - m^dagger, relative to the entry scale (absolute below 1).
inline double hermiticity_error(const ComplexMatrix& m) {
    const double scale = std::max(1.0, max_abs(m));
    return max_abs(m - m.adjoint()) / scale;
}

inline double unitarity_error(const ComplexMatrix& u) {
    const auto id = ComplexMatrix::Identity(u.rows(), u.cols());
    return (u.adjoint() * u - id).norm();
}

// ------------------------------------------------------------------ builders

inline ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

inline ComplexMatrix sigma_x() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1.0;
    return m;
}

inline ComplexMatrix sigma_y() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = -kI;
    m(1, 0) = kI;
    return m;
}

// Basis (|e>, |g>): sigma_z |g> = -|g>.
inline ComplexMatrix sigma_z() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    if (ra * rb > kMaxDim || ca * cb > kMaxDim) {
        throw ContractViolation("kron: product dimension exceeds 8");
    }
    ComplexMatrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

inline StateVector make_state(std::initializer_list<cplx> amps) {
    StateVector v(static_cast<Eigen::Index>(amps.size()));
    Eigen::Index i = 0;
    for (const auto& a : amps) v(i++) = a;
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ContractViolation("make_state: zero or non-finite vector");
    return v / n;
}

inline StateVector basis_state(int dim, int index) {
    StateVector v = StateVector::Zero(dim);
    v(index) = 1.0;
    return v;
}

inline StateVector normalized(const StateVector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ContractViolation("normalized: zero or non-finite vector");
    return v / n;
}

// |<a|b>|^2 for normalized states.
inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(a.dot(b));
}

// Bloch vector of a two-level state in the (|e>, |g>) basis; z = +1 on |e>.
inline Vec3 bloch_vector(const StateVector& psi) {
    if (psi.size() != 2) throw ContractViolation("bloch_vector: state must be two-dimensional");
    const cplx coh = std::conj(psi(0)) * psi(1);
    return {2.0 * coh.real(), 2.0 * coh.imag(), std::norm(psi(0)) - std::norm(psi(1))};
}

// ------------------------------------------------------------------ eigen

struct HermitianEigen {
    RealVector values;     // ascending
    ComplexMatrix vectors; // columns, orthonormal
};

inline HermitianEigen hermitian_eig(const ComplexMatrix& m) {
    require_valid(m, "hermitian_eig");
    if (hermiticity_error(m) > 1e-10) throw ContractViolation("hermitian_eig: matrix is not Hermitian");
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw ContractViolation("hermitian_eig: solver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Fold an angle into [0, 2 pi).
inline double fold_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r + 0.0;
}

// Circular distance between two angles.
inline double phase_distance(double a, double b) {
    const double d = fold_phase(a - b);
    return std::min(d, kTwoPi - d);
}

struct UnitaryEigen {
    RealVector phases;     // u v = exp(i phase) v, phase in [0, 2 pi)
    ComplexMatrix vectors; // columns, orthonormal
};

// A unitary matrix is normal, so its complex Schur form is diagonal and the
// Schur vectors are an orthonormal eigenbasis, also inside degenerate
// eigenspaces.
inline UnitaryEigen unitary_eigenphases(const ComplexMatrix& u) {
    require_valid(u, "unitary_eigenphases");
    if (unitarity_error(u) >= 1e-9) throw ContractViolation("unitary_eigenphases: matrix is not unitary");
    Eigen::ComplexSchur<ComplexMatrix> schur(u);
    if (schur.info() != Eigen::Success) throw ContractViolation("unitary_eigenphases: Schur decomposition failed");
    const auto& t = schur.matrixT();
    UnitaryEigen out{RealVector(u.rows()), schur.matrixU()};
    for (Eigen::Index i = 0; i < u.rows(); ++i) out.phases(i) = fold_phase(std::arg(t(i, i)));
    return out;
}

// exp(-i s h) for Hermitian h. Two-level generators use the closed Pauli form.
inline ComplexMatrix expm_skew(const ComplexMatrix& h, double s) {
    if (h.rows() == 2 && h.cols() == 2) {
        const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
        const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
        const double ax = h(1, 0).real();
        const double ay = h(1, 0).imag();
        const double r = std::sqrt(ax * ax + ay * ay + az * az);
        const double c = std::cos(s * r);
        const double sn = r > 0.0 ? std::sin(s * r) / r : s;
        const cplx g = std::polar(1.0, -s * a0);
        ComplexMatrix out(2, 2);
        out(0, 0) = g * cplx(c, -sn * az);
        out(1, 1) = g * cplx(c, sn * az);
        out(0, 1) = g * (-kI * sn) * cplx(ax, -ay);
        out(1, 0) = g * (-kI * sn) * cplx(ax, ay);
        return out;
    }
    const auto eig = hermitian_eig(h);
    ComplexMatrix scaled = eig.vectors;
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) scaled.col(j) *= std::polar(1.0, -s * eig.values(j));
    return scaled * eig.vectors.adjoint();
}

// ------------------------------------------------------------------ density

class DensityState {
public:
    explicit DensityState(const ComplexMatrix& rho) : rho_(rho) { validate(); }

    static DensityState pure(const StateVector& psi) {
        const StateVector n = normalized(psi);
        return DensityState(ComplexMatrix(n * n.adjoint()));
    }

    static DensityState maximally_mixed(int dim) {
        return DensityState(ComplexMatrix(identity(dim) / static_cast<double>(dim)));
    }

    // Diagonal state from populations; they must sum to one.
    static DensityState diagonal(const RealVector& populations) {
        ComplexMatrix rho = ComplexMatrix::Zero(populations.size(), populations.size());
        for (Eigen::Index i = 0; i < populations.size(); ++i) rho(i, i) = populations(i);
        return DensityState(rho);
    }

    // U rho U^dagger. Unitary evolution keeps the invariants, so no re-check.
    [[nodiscard]] DensityState evolved(const ComplexMatrix& u) const {
        return DensityState(u * rho_ * u.adjoint(), Unchecked{});
    }

    [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return rho_; }
    [[nodiscard]] int dim() const noexcept { return static_cast<int>(rho_.rows()); }
    [[nodiscard]] double trace() const { return rho_.trace().real(); }
    [[nodiscard]] double purity() const { return (rho_ * rho_).trace().real(); }
    [[nodiscard]] double population(int i) const { return rho_(i, i).real(); }

    // Convex combination lambda * a + (1 - lambda) * b.
    static DensityState mix(double lambda, const DensityState& a, const DensityState& b) {
        return DensityState(ComplexMatrix(lambda * a.rho_ + (1.0 - lambda) * b.rho_));
    }

private:
    struct Unchecked {};
    DensityState(ComplexMatrix rho, Unchecked) : rho_(std::move(rho)) {}

    void validate() const {
        require_valid(rho_, "DensityState");
        if (std::abs(rho_.trace() - 1.0) > 1e-10) throw ContractViolation("DensityState: trace differs from 1");
        if (max_abs(rho_ - rho_.adjoint()) > 1e-12) throw ContractViolation("DensityState: not Hermitian");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho_, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -1e-10) throw ContractViolation("DensityState: negative eigenvalue");
    }

    ComplexMatrix rho_;
};

}  // namespace ktuple::linalg
