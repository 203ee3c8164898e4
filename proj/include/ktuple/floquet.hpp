// floquet.hpp: one-period propagators, quasi-energies, Floquet modes
//
// The monodromy U(T_d, 0) of a T_d-periodic Hamiltonian is built by a
// piecewise exponential integrator. Its eigenphases exp(-i 2 pi eps T_d) give
// the quasi-energies eps (folded into [0, nu_d)) and its eigenvectors the
// Floquet modes at the reference time.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <vector>

#include "ktuple/errors.hpp"
#include "ktuple/hamiltonians.hpp"
#include "ktuple/linalg.hpp"

namespace ktuple::floquet {

using linalg::ComplexMatrix;
using linalg::RealVector;
using linalg::StateVector;
using linalg::Vec3;

template <typename F>
concept TimeDependentHamiltonian = requires(const F& f, double t) {
    { f(t) } -> std::convertible_to<ComplexMatrix>;
};

enum class Scheme {
    ExponentialMidpoint,  // 2nd order
    CommutatorFree4,      // 4th order, two exponentials per step
};

struct IntegratorConfig {
    int steps_per_period = 1024;
    Scheme scheme = Scheme::CommutatorFree4;

    void validate() const {
        if (steps_per_period < 64) throw ContractViolation("IntegratorConfig: steps_per_period must be >= 64");
    }
};

// U(t1, t0) using `steps` uniform steps.
template <TimeDependentHamiltonian H>
ComplexMatrix propagate(const H& h, double t0, double t1, int steps, Scheme scheme) {
    if (steps < 1) throw ContractViolation("propagate: need at least one step");
    const double dt = (t1 - t0) / steps;
    const double angle = linalg::kTwoPi * dt;
    ComplexMatrix u;
    for (int i = 0; i < steps; ++i) {
        const double t = t0 + i * dt;
        ComplexMatrix step;
        if (scheme == Scheme::ExponentialMidpoint) {
            step = linalg::expm_skew(h(t + 0.5 * dt), angle);
        } else {
            // Gauss-Legendre nodes with the commutator-free weights.
            constexpr double c1 = 0.5 - std::numbers::sqrt3 / 6.0;
            constexpr double c2 = 0.5 + std::numbers::sqrt3 / 6.0;
            constexpr double a1 = (3.0 - 2.0 * std::numbers::sqrt3) / 12.0;
            constexpr double a2 = (3.0 + 2.0 * std::numbers::sqrt3) / 12.0;
            const ComplexMatrix h1 = h(t + c1 * dt);
            const ComplexMatrix h2 = h(t + c2 * dt);
            step = linalg::expm_skew(a1 * h1 + a2 * h2, angle) * linalg::expm_skew(a2 * h1 + a1 * h2, angle);
        }
        u = (i == 0) ? step : ComplexMatrix(step * u);
    }
    return u;
}

template <TimeDependentHamiltonian H>
ComplexMatrix monodromy(const H& h, double nu_d, const IntegratorConfig& cfg = {}) {
    cfg.validate();
    if (!(nu_d > 0.0)) throw ContractViolation("monodromy: drive frequency must be positive");
    return propagate(h, 0.0, 1.0 / nu_d, cfg.steps_per_period, cfg.scheme);
}

// Monodromy accepted once doubling the step count changes it by less than
// `tol` (Frobenius norm); at most `refinements` doublings are tried.
template <TimeDependentHamiltonian H>
ComplexMatrix converged_monodromy(const H& h, double nu_d, IntegratorConfig cfg = {}, double tol = 1e-8,
                                  int refinements = 2) {
    ComplexMatrix prev = monodromy(h, nu_d, cfg);
    for (int r = 0; r < refinements; ++r) {
        cfg.steps_per_period *= 2;
        ComplexMatrix next = monodromy(h, nu_d, cfg);
        if ((next - prev).norm() < tol) return next;
        prev = std::move(next);
    }
    throw IntegratorAccuracyError("monodromy did not converge under step refinement");
}

inline auto tls_hamiltonian_fn(const model::TlsModel& m, const model::DriveParams& d) {
    return [m, d](double t) { return model::tls_hamiltonian(m, d, t); };
}

// ------------------------------------------------------------------ decomposition

struct FloquetDecomposition {
    ComplexMatrix monodromy;
    RealVector quasi_energies;  // MHz, in [0, nu_d)
    ComplexMatrix modes;        // columns, Floquet modes at t = 0
    double nu_d = 1.0;
    double phase_rad = 0.0;
    bool degenerate = false;

    [[nodiscard]] int dim() const { return static_cast<int>(monodromy.rows()); }
    [[nodiscard]] StateVector mode(int i) const { return modes.col(i); }
};

// Two-level modes are ordered so that mode 0 has the larger overlap with the
// bare ground state; larger systems are ordered by quasi-energy.
inline FloquetDecomposition floquet_decompose(const ComplexMatrix& u, double nu_d, double phase_rad = 0.0) {
    if (!(nu_d > 0.0)) throw ContractViolation("floquet_decompose: drive frequency must be positive");
    const auto eig = linalg::unitary_eigenphases(u);
    const int n = static_cast<int>(u.rows());

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    if (n == 2) {
        if (std::norm(eig.vectors(model::kTlsGround, 1)) > std::norm(eig.vectors(model::kTlsGround, 0)))
            std::swap(order[0], order[1]);
    }

    FloquetDecomposition out;
    out.monodromy = u;
    out.nu_d = nu_d;
    out.phase_rad = phase_rad;
    out.quasi_energies.resize(n);
    out.modes.resize(n, n);
    for (int i = 0; i < n; ++i) {
        const int src = order[i];
        double eps = nu_d * linalg::fold_phase(-eig.phases(src)) / linalg::kTwoPi;
        if (eps >= nu_d) eps = 0.0;
        out.quasi_energies(i) = eps;
        // Gauge: largest component real and positive.
        StateVector v = eig.vectors.col(src);
        Eigen::Index k = 0;
        v.cwiseAbs().maxCoeff(&k);
        v *= std::polar(1.0, -std::arg(v(k)));
        out.modes.col(i) = v;
    }
    if (n > 2) {
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return out.quasi_energies(a) < out.quasi_energies(b); });
        const RealVector e = out.quasi_energies;
        const ComplexMatrix m = out.modes;
        for (int i = 0; i < n; ++i) {
            out.quasi_energies(i) = e(idx[i]);
            out.modes.col(i) = m.col(idx[i]);
        }
    }
    for (int i = 0; i < n && !out.degenerate; ++i)
        for (int j = i + 1; j < n; ++j)
            if (linalg::phase_distance(eig.phases(i), eig.phases(j)) < 1e-9 * linalg::kTwoPi) out.degenerate = true;
    return out;
}

inline FloquetDecomposition tls_floquet(const model::TlsModel& m, const model::DriveParams& d,
                                        const IntegratorConfig& cfg = {}) {
    m.validate();
    d.validate();
    return floquet_decompose(monodromy(tls_hamiltonian_fn(m, d), d.frequency_mhz, cfg), d.frequency_mhz,
                             d.phase_rad);
}

// Folded quasi-energy difference |eps_2 - eps_1| / nu_d in [0, 1).
inline double qed(const FloquetDecomposition& dec) {
    if (dec.dim() != 2) throw ContractViolation("qed: defined for two-level decompositions only");
    double q = std::abs(dec.quasi_energies(1) - dec.quasi_energies(0)) / dec.nu_d;
    if (q >= 1.0) q -= 1.0;
    return q;
}

inline double qed(const model::TlsModel& m, const model::DriveParams& d, const IntegratorConfig& cfg = {}) {
    return qed(tls_floquet(m, d, cfg));
}

// Frequency (cycles per period) visible in a stroboscopic spectrum.
inline double visible_frequency(double q) { return std::min(q, 1.0 - q); }

// ------------------------------------------------------------------ evolution

// U^n psi0 via the mode expansion psi(n T) = sum_i c_i exp(-i 2 pi n eps_i / nu_d) phi_i.
inline StateVector stroboscopic_evolve(const StateVector& psi0, long n, const FloquetDecomposition& dec) {
    if (psi0.size() != dec.dim()) throw ContractViolation("stroboscopic_evolve: dimension mismatch");
    const StateVector c = dec.modes.adjoint() * psi0;
    StateVector out = StateVector::Zero(dec.dim());
    for (int i = 0; i < dec.dim(); ++i) {
        const double cycles = std::fmod(static_cast<double>(n) * (dec.quasi_energies(i) / dec.nu_d), 1.0);
        out += (c(i) * std::polar(1.0, -linalg::kTwoPi * cycles)) * dec.modes.col(i);
    }
    return out;
}

struct TrajectoryPoint {
    double t;  // same time unit as 1 / nu_d
    StateVector state;
};

// Continuous-time states at samples_per_period uniform samples per period,
// from t = 0 through t = n_periods T_d inclusive.
template <TimeDependentHamiltonian H>
std::vector<TrajectoryPoint> intra_period_trajectory(const StateVector& psi0, int n_periods, int samples_per_period,
                                                     const H& h, double nu_d, const IntegratorConfig& cfg = {}) {
    cfg.validate();
    if (samples_per_period < 1 || n_periods < 0) throw ContractViolation("intra_period_trajectory: bad sampling");
    const double period = 1.0 / nu_d;
    const int sub_steps = (cfg.steps_per_period + samples_per_period - 1) / samples_per_period;

    // W[j] = U(t_j, 0) over one period; W[samples] is the monodromy.
    std::vector<ComplexMatrix> w(samples_per_period + 1);
    w[0] = linalg::identity(static_cast<int>(psi0.size()));
    for (int j = 0; j < samples_per_period; ++j) {
        const double ta = period * j / samples_per_period;
        const double tb = period * (j + 1) / samples_per_period;
        w[j + 1] = propagate(h, ta, tb, sub_steps, cfg.scheme) * w[j];
    }

    std::vector<TrajectoryPoint> out;
    out.reserve(static_cast<std::size_t>(n_periods) * samples_per_period + 1);
    StateVector start = psi0;
    out.push_back({0.0, psi0});
    for (int p = 0; p < n_periods; ++p) {
        for (int j = 1; j <= samples_per_period; ++j)
            out.push_back({period * (p + static_cast<double>(j) / samples_per_period), w[j] * start});
        start = out.back().state;
    }
    return out;
}

inline std::vector<TrajectoryPoint> intra_period_trajectory(const StateVector& psi0, int n_periods,
                                                            int samples_per_period, const model::TlsModel& m,
                                                            const model::DriveParams& d,
                                                            const IntegratorConfig& cfg = {}) {
    return intra_period_trajectory(psi0, n_periods, samples_per_period, tls_hamiltonian_fn(m, d), d.frequency_mhz,
                                   cfg);
}

// Bloch vector of mode 0; stroboscopic evolution rotates about this axis.
inline Vec3 floquet_axis(const FloquetDecomposition& dec) {
    if (dec.dim() != 2) throw ContractViolation("floquet_axis: defined for two-level decompositions only");
    if (dec.degenerate) throw ContractViolation("floquet_axis: degenerate quasi-energies have no unique axis");
    return linalg::bloch_vector(dec.mode(0));
}

}  // namespace ktuple::floquet
