// hamiltonians.hpp: driven two-level and NV(-) + 15N six-level models
//
// Units: hbar = 1, energies are ordinary frequencies in MHz, times in
// microseconds, so a propagator over dt is exp(-i 2 pi H dt).
//
// Six-level basis ordering is (m_S = +1, 0, -1) x (m_I = +1/2, -1/2):
//   index = 2 * (1 - m_S) + (m_I == +1/2 ? 0 : 1)

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ktuple/bisection.hpp"
#include "ktuple/errors.hpp"
#include "ktuple/linalg.hpp"

namespace ktuple::model {

using linalg::ComplexMatrix;
using linalg::DensityState;
using linalg::RealVector;
using linalg::StateVector;

struct DriveParams {
    double amplitude_mhz = 0.0;
    double frequency_mhz = 1.0;  // nu_d; the period is 1 / nu_d
    double phase_rad = 0.0;

    void validate() const {
        if (!(frequency_mhz > 0.0) || !std::isfinite(frequency_mhz))
            throw ContractViolation("DriveParams: drive frequency must be positive");
        if (!(amplitude_mhz >= 0.0) || !std::isfinite(amplitude_mhz))
            throw ContractViolation("DriveParams: amplitude must be non-negative");
    }
    [[nodiscard]] double period() const { return 1.0 / frequency_mhz; }
};

struct TlsModel {
    double level_spacing_mhz = 1.0;

    void validate() const {
        if (!(level_spacing_mhz > 0.0) || !std::isfinite(level_spacing_mhz))
            throw ContractViolation("TlsModel: level spacing must be positive");
    }
};

// (Delta0 / 2) sigma_z + A sin(2 pi nu_d t + phi0) sigma_x
inline ComplexMatrix tls_hamiltonian(const TlsModel& model, const DriveParams& drive, double t) {
    const double s = drive.amplitude_mhz * std::sin(linalg::kTwoPi * drive.frequency_mhz * t + drive.phase_rad);
    ComplexMatrix h(2, 2);
    h(0, 0) = 0.5 * model.level_spacing_mhz;
    h(1, 1) = -0.5 * model.level_spacing_mhz;
    h(0, 1) = h(1, 0) = s;
    return h;
}

inline constexpr int kTlsExcited = 0;
inline constexpr int kTlsGround = 1;

inline StateVector tls_ground() { return linalg::basis_state(2, kTlsGround); }

// ------------------------------------------------------------------ NV model

struct NvModel {
    double d_zfs_mhz = 2870.0;
    double b_z_gauss = 1020.874;
    double gamma_e_mhz_per_g = -2.8025;     // enters as -gamma_e S_z B_z
    double gamma_n_mhz_per_g = -4.316e-4;   // 15N, sign included
    double a_par_mhz = 3.03;
    double a_perp_mhz = 3.65;
    double gamma_x_mhz_per_g = -2.8025;     // transverse drive coupling
    double amplitude_calibration_g_per_mv = 1.0;
    bool nuclear_drive = true;

    void validate() const {
        const std::array<double, 8> v{d_zfs_mhz, b_z_gauss, gamma_e_mhz_per_g, gamma_n_mhz_per_g,
                                      a_par_mhz, a_perp_mhz, gamma_x_mhz_per_g, amplitude_calibration_g_per_mv};
        if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }))
            throw ContractViolation("NvModel: non-finite parameter");
        if (!(d_zfs_mhz > 0.0)) throw ContractViolation("NvModel: D_ZFS must be positive");
    }
};

inline constexpr int kNvDim = 6;

constexpr int nv_index(int m_s, bool nuclear_up) { return 2 * (1 - m_s) + (nuclear_up ? 0 : 1); }

struct BareLabel {
    int m_s;
    bool nuclear_up;

    [[nodiscard]] std::string str() const {
        return "|" + std::string(m_s > 0 ? "+1" : m_s == 0 ? "0" : "-1") + "," + (nuclear_up ? "+1/2" : "-1/2") + ">";
    }
    friend bool operator==(const BareLabel&, const BareLabel&) = default;
};

constexpr BareLabel nv_label(int index) { return {1 - index / 2, index % 2 == 0}; }

namespace detail {

inline ComplexMatrix spin1_x() {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = std::numbers::sqrt2 / 2.0;
    return m;
}
inline ComplexMatrix spin1_y() {
    const linalg::cplx a = -linalg::kI * (std::numbers::sqrt2 / 2.0);
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 1) = a;
    m(1, 2) = a;
    m(1, 0) = std::conj(a);
    m(2, 1) = std::conj(a);
    return m;
}
inline ComplexMatrix spin1_z() {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(2, 2) = -1.0;
    return m;
}

}  // namespace detail

// Electronic and nuclear operators lifted to the six-level space.
struct NvOperators {
    ComplexMatrix sx, sy, sz, ix, iy, iz;

    static const NvOperators& get() {
        static const NvOperators ops = [] {
            const ComplexMatrix e3 = linalg::identity(3), e2 = linalg::identity(2);
            return NvOperators{linalg::kron(detail::spin1_x(), e2), linalg::kron(detail::spin1_y(), e2),
                               linalg::kron(detail::spin1_z(), e2), linalg::kron(e3, 0.5 * linalg::sigma_x()),
                               linalg::kron(e3, 0.5 * linalg::sigma_y()), linalg::kron(e3, 0.5 * linalg::sigma_z())};
        }();
        return ops;
    }
};

inline ComplexMatrix nv_static_hamiltonian(const NvModel& m) {
    const auto& op = NvOperators::get();
    const ComplexMatrix sz2 = op.sz * op.sz;
    return m.d_zfs_mhz * (sz2 - (2.0 / 3.0) * linalg::identity(kNvDim)) - m.gamma_e_mhz_per_g * m.b_z_gauss * op.sz -
           m.gamma_n_mhz_per_g * m.b_z_gauss * op.iz + m.a_par_mhz * op.sz * op.iz +
           m.a_perp_mhz * (op.sx * op.ix + op.sy * op.iy);
}

// Operator multiplying B_RF sin(omega t): -gamma_x S_x [- gamma_n I_x].
inline ComplexMatrix nv_drive_operator(const NvModel& m) {
    const auto& op = NvOperators::get();
    ComplexMatrix d = -m.gamma_x_mhz_per_g * op.sx;
    if (m.nuclear_drive) d -= m.gamma_n_mhz_per_g * op.ix;
    return d;
}

// Drive frequency and phase come from `drive`; its amplitude field is ignored
// in favour of a_rf_mv mapped through the model's calibration.
inline ComplexMatrix nv_hamiltonian(const NvModel& m, double a_rf_mv, const DriveParams& drive, double t) {
    const double field = m.amplitude_calibration_g_per_mv * a_rf_mv;
    return nv_static_hamiltonian(m) +
           (field * std::sin(linalg::kTwoPi * drive.frequency_mhz * t + drive.phase_rad)) * nv_drive_operator(m);
}

// Precomputed pieces for the integrator's inner loop.
struct NvDrivenHamiltonian {
    ComplexMatrix h_static;
    ComplexMatrix h_drive;  // already scaled by the field amplitude
    double frequency_mhz;
    double phase_rad;

    NvDrivenHamiltonian(const NvModel& m, double a_rf_mv, const DriveParams& drive)
        : h_static(nv_static_hamiltonian(m)),
          h_drive(m.amplitude_calibration_g_per_mv * a_rf_mv * nv_drive_operator(m)),
          frequency_mhz(drive.frequency_mhz),
          phase_rad(drive.phase_rad) {}

    ComplexMatrix operator()(double t) const {
        return h_static + std::sin(linalg::kTwoPi * frequency_mhz * t + phase_rad) * h_drive;
    }
};

// ------------------------------------------------------------------ eigenstructure

struct NvEigenStructure {
    RealVector energies;                // ascending, MHz
    ComplexMatrix states;               // columns
    std::array<BareLabel, kNvDim> labels;  // dominant bare character per column
    double alpha_sq = 1.0;              // |<-1,+1/2|+>_alpha|^2
    double delta0_selected_mhz = 0.0;   // E(|+>_alpha) - E(|0,+1/2>)
    int plus_index = -1;
    int zero_up_index = -1;
    bool at_crossing = false;

    [[nodiscard]] StateVector plus_state() const { return states.col(plus_index); }
    [[nodiscard]] StateVector zero_up_state() const { return states.col(zero_up_index); }
};

namespace detail {

inline int dominant_column(const ComplexMatrix& v, int row, double* best = nullptr, double* second = nullptr) {
    int arg = 0;
    double b = -1.0, s = -1.0;
    for (int j = 0; j < v.cols(); ++j) {
        const double w = std::norm(v(row, j));
        if (w > b) {
            s = b;
            b = w;
            arg = j;
        } else if (w > s) {
            s = w;
        }
    }
    if (best) *best = b;
    if (second) *second = s;
    return arg;
}

}  // namespace detail

// |+>_alpha is the eigenstate with the largest |-1,+1/2> weight, so it stays
// the level continuously connected to |-1,+1/2> on both sides of the GSLAC.
inline NvEigenStructure nv_eigenstructure(const NvModel& m) {
    m.validate();
    const auto eig = linalg::hermitian_eig(nv_static_hamiltonian(m));
    NvEigenStructure out;
    out.energies = eig.values;
    out.states = eig.vectors;
    for (int j = 0; j < kNvDim; ++j) {
        int best_row = 0;
        double w_best = -1.0;
        for (int r = 0; r < kNvDim; ++r) {
            if (std::norm(eig.vectors(r, j)) > w_best) {
                w_best = std::norm(eig.vectors(r, j));
                best_row = r;
            }
        }
        out.labels[j] = nv_label(best_row);
    }
    double best = 0.0, second = 0.0;
    out.plus_index = detail::dominant_column(eig.vectors, nv_index(-1, true), &best, &second);
    out.zero_up_index = detail::dominant_column(eig.vectors, nv_index(0, true));
    out.at_crossing = (best - second) < 1e-9;
    out.alpha_sq = std::clamp(best, 0.0, 1.0);
    out.delta0_selected_mhz = eig.values(out.plus_index) - eig.values(out.zero_up_index);
    return out;
}

// |<+|gamma_x S_x|0,+1/2>| in MHz per gauss.
inline double nv_transition_coupling(const NvModel& m, const NvEigenStructure& s) {
    const auto& op = NvOperators::get();
    return std::abs(m.gamma_x_mhz_per_g * s.plus_state().dot(op.sx * s.zero_up_state()));
}

// Drive amplitude on the selected transition relative to its level spacing,
// comparable to A / Delta0 of the bare two-level model.
inline double renormalized_amplitude(const NvModel& m, const NvEigenStructure& s, double a_rf_mv) {
    if (!(s.delta0_selected_mhz > 0.0))
        throw ContractViolation("renormalized_amplitude: selected level spacing is not positive");
    return nv_transition_coupling(m, s) * m.amplitude_calibration_g_per_mv * a_rf_mv / s.delta0_selected_mhz;
}

// Instrument amplitude (mV) that realizes a renormalized amplitude.
inline double instrument_amplitude(const NvModel& m, const NvEigenStructure& s, double renormalized) {
    const double per_mv = nv_transition_coupling(m, s) * m.amplitude_calibration_g_per_mv / s.delta0_selected_mhz;
    if (!(per_mv > 0.0)) throw ContractViolation("instrument_amplitude: transition is not driven");
    return renormalized / per_mv;
}

// Energies tracked through a field scan by maximum eigenvector overlap with
// the previous grid point (ties broken by energy order).
struct LevelScan {
    std::vector<double> b_z_gauss;
    std::vector<std::array<double, kNvDim>> energies;
    std::vector<double> alpha_sq;
};

inline LevelScan scan_levels(NvModel m, const std::vector<double>& b_grid) {
    LevelScan out;
    ComplexMatrix prev;
    for (double b : b_grid) {
        m.b_z_gauss = b;
        const auto s = nv_eigenstructure(m);
        std::array<int, kNvDim> track{};
        if (prev.size() == 0) {
            for (int j = 0; j < kNvDim; ++j) track[j] = j;
        } else {
            std::array<bool, kNvDim> used{};
            for (int t = 0; t < kNvDim; ++t) {
                int arg = -1;
                double w = -1.0;
                for (int j = 0; j < kNvDim; ++j) {
                    if (used[j]) continue;
                    const double o = std::norm(prev.col(t).dot(s.states.col(j)));
                    if (o > w + 1e-12) {
                        w = o;
                        arg = j;
                    }
                }
                used[arg] = true;
                track[t] = arg;
            }
        }
        ComplexMatrix cur(kNvDim, kNvDim);
        std::array<double, kNvDim> e{};
        for (int t = 0; t < kNvDim; ++t) {
            cur.col(t) = s.states.col(track[t]);
            e[t] = s.energies(track[t]);
        }
        prev = cur;
        out.b_z_gauss.push_back(b);
        out.energies.push_back(e);
        out.alpha_sq.push_back(s.alpha_sq);
    }
    return out;
}

// ------------------------------------------------------------------ calibration

struct CalibrationTargets {
    double b_z_gauss = 1020.874;
    double delta0_mhz = 7.50;
    double alpha_sq = 0.9044;
};

enum class CalibrationMode {
    HyperfinePair,  // solve (A_par, A_perp) at fixed B_z
    FieldAndPerp,   // solve (B_z, A_perp) at fixed A_par
};

struct CalibrationBox {
    double a_par_min = -20.0, a_par_max = 20.0;
    double a_perp_min = 1e-3, a_perp_max = 20.0;
    double b_min = 950.0, b_max = 1100.0;
    int grid_points = 48;
};

namespace detail {

// Root of f on [lo, hi] located by a grid scan then bisection.
template <typename F>
std::optional<double> scan_root(F&& f, double lo, double hi, int grid) {
    std::vector<double> xs(grid), fs(grid);
    for (int i = 0; i < grid; ++i) {
        xs[i] = lo + (hi - lo) * i / (grid - 1);
        fs[i] = f(xs[i]);
    }
    const auto br = sign_change_brackets(xs, fs);
    if (br.empty()) return std::nullopt;
    return bisect(f, br.front(), 200, 1e-13 * std::max(1.0, std::abs(hi - lo))).x;
}

inline double relative_mismatch(const NvEigenStructure& s, const CalibrationTargets& t) {
    return std::max(std::abs(s.delta0_selected_mhz - t.delta0_mhz) / t.delta0_mhz,
                    std::abs(s.alpha_sq - t.alpha_sq) / std::max(t.alpha_sq, 1e-12));
}

}  // namespace detail

// Nested bisection: the inner solve matches Delta0 by moving A_par (or B_z),
// the outer solve matches alpha^2 by moving A_perp.
inline NvModel calibrate_hyperfine(NvModel templ, const CalibrationTargets& targets,
                                   CalibrationMode mode = CalibrationMode::HyperfinePair,
                                   const CalibrationBox& box = {}) {
    if (mode == CalibrationMode::HyperfinePair) templ.b_z_gauss = targets.b_z_gauss;

    auto with = [&](double inner, double perp) {
        NvModel m = templ;
        m.a_perp_mhz = perp;
        (mode == CalibrationMode::HyperfinePair ? m.a_par_mhz : m.b_z_gauss) = inner;
        return m;
    };
    const double in_lo = mode == CalibrationMode::HyperfinePair ? box.a_par_min : box.b_min;
    const double in_hi = mode == CalibrationMode::HyperfinePair ? box.a_par_max : box.b_max;

    auto solve_inner = [&](double perp) -> std::optional<double> {
        return detail::scan_root(
            [&](double x) { return nv_eigenstructure(with(x, perp)).delta0_selected_mhz - targets.delta0_mhz; },
            in_lo, in_hi, box.grid_points);
    };
    double best_residual = std::numeric_limits<double>::infinity();
    auto outer = [&](double perp) {
        const auto inner = solve_inner(perp);
        if (!inner) return std::numeric_limits<double>::quiet_NaN();
        const auto s = nv_eigenstructure(with(*inner, perp));
        best_residual = std::min(best_residual, detail::relative_mismatch(s, targets));
        return s.alpha_sq - targets.alpha_sq;
    };

    const auto perp = detail::scan_root(outer, box.a_perp_min, box.a_perp_max, box.grid_points);
    if (!perp) throw CalibrationError("calibrate_hyperfine: no solution in the search box", best_residual);
    const auto inner = solve_inner(*perp);
    if (!inner) throw CalibrationError("calibrate_hyperfine: inner solve lost its bracket", best_residual);
    NvModel out = with(*inner, *perp);
    const double mismatch = detail::relative_mismatch(nv_eigenstructure(out), targets);
    if (mismatch > 1e-3) throw CalibrationError("calibrate_hyperfine: targets not reproduced", mismatch);
    return out;
}

// Single-target variant: move B_z until the selected spacing equals delta0.
inline NvModel tune_field_for_spacing(NvModel m, double delta0_mhz, double b_min = 950.0, double b_max = 1100.0) {
    auto f = [&](double b) {
        NvModel t = m;
        t.b_z_gauss = b;
        return nv_eigenstructure(t).delta0_selected_mhz - delta0_mhz;
    };
    const auto b = detail::scan_root(f, b_min, b_max, 64);
    if (!b) throw CalibrationError("tune_field_for_spacing: spacing not reachable", std::abs(f(b_min)));
    m.b_z_gauss = *b;
    return m;
}

// ------------------------------------------------------------------ photoluminescence

struct PlParams {
    double bright_level = 1.0;  // m_S = 0 manifold
    double dark_level = 0.7;    // m_S = +-1 manifolds

    void validate() const {
        if (!(bright_level > dark_level)) throw ContractViolation("PlParams: bright level must exceed dark level");
    }
};

// Population of the m_S = 0 manifold in the bare basis, traced over the nucleus.
inline double ms0_population(const DensityState& rho) {
    if (rho.dim() != kNvDim) throw ContractViolation("ms0_population: state must be six-dimensional");
    return rho.population(nv_index(0, true)) + rho.population(nv_index(0, false));
}

inline double pl_signal(const DensityState& rho, const PlParams& pl) {
    return pl.dark_level + (pl.bright_level - pl.dark_level) * ms0_population(rho);
}

}  // namespace ktuple::model
