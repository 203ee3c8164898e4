// ktupling.hpp: period k-tupling amplitudes and modulation periods
//
// Period k-tupling occurs where the folded quasi-energy difference q equals
// j/k. Roots are bracketed on an amplitude grid and refined by bisection on
// the wrapped residual q - j/k.

#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ktuple/bisection.hpp"
#include "ktuple/errors.hpp"
#include "ktuple/floquet.hpp"
#include "ktuple/hamiltonians.hpp"
#include "ktuple/parallel.hpp"

namespace ktuple::ktupling {

using floquet::IntegratorConfig;
using model::TlsModel;

// Amplitude scan range in units of the level spacing.
struct ScanConfig {
    double a_min_rel = 0.0;
    double a_max_rel = 1.2;
    int grid_points = 2048;
    int max_bisections = 80;
    int threads = 1;
};

struct KTuplingPoint {
    int j = 1;
    int k = 2;
    double amplitude = 0.0;  // MHz for the two-level model, mV for NV
    double nu_d_mhz = 1.0;
    double residual = 0.0;
    int bracket_count = 1;
    double certificate_fidelity = std::numeric_limits<double>::quiet_NaN();
};

struct ManifoldCurve {
    int j = 1;
    int k = 2;
    std::vector<KTuplingPoint> points;  // sorted by nu_d
    std::vector<double> gaps;           // nu_d values without a root
};

inline void validate_order(int j, int k) {
    if (k < 2 || j < 1 || j >= k) throw std::invalid_argument("k-tupling order needs 1 <= j < k, k >= 2");
    if (std::gcd(j, k) != 1) throw std::invalid_argument("k-tupling order needs gcd(j, k) = 1");
}

// Wrap into [-1/2, 1/2).
inline double wrap_residual(double x) {
    double r = x - std::floor(x + 0.5);
    if (r >= 0.5) r -= 1.0;
    return r;
}

inline double ktupling_residual(double amplitude, double nu_d, int j, int k, const TlsModel& m,
                                const IntegratorConfig& cfg = {}) {
    const double q = floquet::qed(m, {amplitude, nu_d, 0.0}, cfg);
    return wrap_residual(q - static_cast<double>(j) / k);
}

inline KTuplingPoint find_amplitude(int j, int k, double nu_d, const ScanConfig& scan, const TlsModel& m,
                                    const IntegratorConfig& cfg = {}) {
    validate_order(j, k);
    m.validate();
    if (scan.grid_points < 2 || !(scan.a_max_rel > scan.a_min_rel))
        throw std::invalid_argument("find_amplitude: bad scan range");

    const double d0 = m.level_spacing_mhz;
    std::vector<double> xs(scan.grid_points), fs(scan.grid_points);
    for (int i = 0; i < scan.grid_points; ++i)
        xs[i] = d0 * (scan.a_min_rel + (scan.a_max_rel - scan.a_min_rel) * i / (scan.grid_points - 1));
    parallel_for(xs.size(), scan.threads, [&](std::size_t i) { fs[i] = ktupling_residual(xs[i], nu_d, j, k, m, cfg); });

    const auto brackets = sign_change_brackets(xs, fs, 0.25);
    if (brackets.empty()) {
        throw NotFoundError("no bracket for j/k = " + std::to_string(j) + "/" + std::to_string(k) + " in A/Delta0 in [" +
                            std::to_string(scan.a_min_rel) + ", " + std::to_string(scan.a_max_rel) + "]");
    }
    auto f = [&](double a) { return ktupling_residual(a, nu_d, j, k, m, cfg); };
    const auto root = bisect(f, brackets.front(), scan.max_bisections, 1e-13 * d0, 1e-10);
    if (!(std::abs(root.fx) < 1e-8)) throw ContractViolation("find_amplitude: bisection did not reach |residual| < 1e-8");

    KTuplingPoint p;
    p.j = j;
    p.k = k;
    p.amplitude = root.x;
    p.nu_d_mhz = nu_d;
    p.residual = root.fx;
    p.bracket_count = static_cast<int>(brackets.size());
    return p;
}

// Smallest fidelity |<psi|U^k|psi>|^2 over random initial states; U is
// integrated afresh and raised to the k-th power directly.
inline double revival_certificate(const KTuplingPoint& p, const TlsModel& m, const IntegratorConfig& cfg = {},
                                  int n_states = 10, std::uint64_t seed = 0x5eed) {
    const auto u = floquet::monodromy(floquet::tls_hamiltonian_fn(m, {p.amplitude, p.nu_d_mhz, 0.0}), p.nu_d_mhz, cfg);
    linalg::ComplexMatrix uk = linalg::identity(2);
    for (int i = 0; i < p.k; ++i) uk = u * uk;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double worst = 1.0;
    for (int s = 0; s < n_states; ++s) {
        const auto psi = linalg::make_state({{g(rng), g(rng)}, {g(rng), g(rng)}});
        worst = std::min(worst, linalg::fidelity(psi, uk * psi));
    }
    return worst;
}

inline ManifoldCurve scan_manifold(int j, int k, const std::vector<double>& nu_grid, const ScanConfig& scan,
                                   const TlsModel& m, const IntegratorConfig& cfg = {}, bool certify = false) {
    validate_order(j, k);
    ManifoldCurve curve{j, k, {}, {}};
    std::vector<double> nus = nu_grid;
    std::sort(nus.begin(), nus.end());
    for (double nu : nus) {
        try {
            auto p = find_amplitude(j, k, nu, scan, m, cfg);
            if (certify) p.certificate_fidelity = revival_certificate(p, m, cfg);
            curve.points.push_back(p);
        } catch (const NotFoundError&) {
            curve.gaps.push_back(nu);
        }
    }
    return curve;
}

struct ModulationPeriod {
    double tau = std::numeric_limits<double>::infinity();  // units of T_d
    bool infinite = true;
};

inline ModulationPeriod modulation_period_from_residual(double residual) {
    if (residual == 0.0) return {};
    return {1.0 / std::abs(residual), false};
}

inline ModulationPeriod predicted_modulation_period(double amplitude, double nu_d, int j, int k, const TlsModel& m,
                                                   const IntegratorConfig& cfg = {}) {
    return modulation_period_from_residual(ktupling_residual(amplitude, nu_d, j, k, m, cfg));
}

// NV: the root is found for the two-level abstraction of the selected
// transition (in tune unless nu_d_mhz > 0) at renormalized amplitude, then
// mapped back to instrument millivolts.
inline KTuplingPoint find_amplitude_nv(int j, int k, const model::NvModel& nv, const ScanConfig& scan,
                                       const IntegratorConfig& cfg = {}, double nu_d_mhz = 0.0) {
    const auto s = model::nv_eigenstructure(nv);
    if (!(s.delta0_selected_mhz > 0.0)) throw ContractViolation("find_amplitude_nv: selected spacing not positive");
    const TlsModel tls{s.delta0_selected_mhz};
    const double nu = nu_d_mhz > 0.0 ? nu_d_mhz : s.delta0_selected_mhz;
    auto p = find_amplitude(j, k, nu, scan, tls, cfg);
    p.amplitude = model::instrument_amplitude(nv, s, p.amplitude / s.delta0_selected_mhz);
    return p;
}

}  // namespace ktuple::ktupling
