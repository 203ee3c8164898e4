// experiment.hpp: synthetic stroboscopic measurement campaigns
//
// Each drive amplitude gives one series: the six-level state is propagated
// period by period with the monodromy, read out as PL, pulled toward the
// fully mixed PL level by an exponential envelope and optionally shot-noised.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ktuple/errors.hpp"
#include "ktuple/floquet.hpp"
#include "ktuple/hamiltonians.hpp"
#include "ktuple/heatmap.hpp"
#include "ktuple/parallel.hpp"
#include "ktuple/signal.hpp"
#include "ktuple/version.hpp"

namespace ktuple::experiment {

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline std::string num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Initial populations: p_target in |0,+1/2>, a share of the remainder in
// |0,-1/2>, the rest spread evenly over the four m_S = +-1 levels.
struct InitialState {
    double p_target = 0.95;
    double nuclear_share = 0.5;

    void validate() const {
        if (!(p_target >= 0.0 && p_target <= 1.0)) throw ContractViolation("InitialState: p_target outside [0, 1]");
        if (!(nuclear_share >= 0.0 && nuclear_share <= 1.0))
            throw ContractViolation("InitialState: nuclear_share outside [0, 1]");
    }

    [[nodiscard]] linalg::RealVector populations() const {
        validate();
        const double rest = 1.0 - p_target;
        linalg::RealVector p = linalg::RealVector::Constant(model::kNvDim, rest * (1.0 - nuclear_share) / 4.0);
        p(model::nv_index(0, true)) = p_target;
        p(model::nv_index(0, false)) = rest * nuclear_share;
        return p;
    }
};

struct ProtocolConfig {
    std::vector<double> amplitudes_mv;
    int n_periods = 200;
    double nu_d_mhz = 0.0;  // <= 0: in tune with the selected spacing
    InitialState init;
    double t_relax_periods = std::numeric_limits<double>::infinity();
    double shot_noise = std::numeric_limits<double>::infinity();  // photons at the bright level; inf or 0 disables
    std::uint64_t seed = 1;
    floquet::IntegratorConfig integrator{4096, floquet::Scheme::CommutatorFree4};
    model::PlParams pl;
    int threads = 1;

    void validate() const {
        if (n_periods < 1) throw ContractViolation("ProtocolConfig: n_periods must be positive");
        if (!(t_relax_periods > 0.0)) throw ContractViolation("ProtocolConfig: T_relax must be positive");
        if (shot_noise < 0.0) throw ContractViolation("ProtocolConfig: shot_noise must be non-negative");
        init.validate();
        integrator.validate();
        pl.validate();
    }
    [[nodiscard]] bool noisy() const { return shot_noise > 0.0 && std::isfinite(shot_noise); }
};

struct CampaignDataset {
    std::vector<signal::StroboscopicSeries> series;
    Metadata metadata;
};

// PL_mix + (PL - PL_mix) exp(-n / T_relax)
inline double decayed(double clean, double mixed, long n, double t_relax) {
    if (!std::isfinite(t_relax)) return clean;
    return mixed + (clean - mixed) * std::exp(-static_cast<double>(n) / t_relax);
}

// Independent stream per amplitude index, whatever the scheduling order.
inline std::mt19937_64 stream_for(std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

// Poisson counts with mean shot_noise * value / bright, rescaled to PL units.
inline void apply_shot_noise(signal::StroboscopicSeries& s, double shot_noise, double bright, std::mt19937_64& rng) {
    s.sigma.emplace(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double mean = shot_noise * s.values[i] / bright;
        std::poisson_distribution<long long> pd(std::max(mean, 0.0));
        const double draw = static_cast<double>(pd(rng));
        s.values[i] = draw * bright / shot_noise;
        (*s.sigma)[i] = std::sqrt(std::max(draw, 1.0)) * bright / shot_noise;
    }
}

inline double resolved_drive_frequency(const model::NvModel& m, const ProtocolConfig& cfg) {
    return cfg.nu_d_mhz > 0.0 ? cfg.nu_d_mhz : model::nv_eigenstructure(m).delta0_selected_mhz;
}

// Noise-free, undecayed PL(n) for n = 1..N; also returns the purity drift.
inline std::vector<double> clean_pl_series(const model::NvModel& m, double a_rf_mv, double nu_d,
                                           const ProtocolConfig& cfg, double* purity_drift = nullptr) {
    const model::NvDrivenHamiltonian h(m, a_rf_mv, {0.0, nu_d, 0.0});
    const auto u = floquet::monodromy(h, nu_d, cfg.integrator);
    auto rho = linalg::DensityState::diagonal(cfg.init.populations());
    const double p0 = rho.purity();
    double drift = 0.0;
    std::vector<double> out(cfg.n_periods);
    for (int n = 0; n < cfg.n_periods; ++n) {
        rho = rho.evolved(u);
        out[n] = model::pl_signal(rho, cfg.pl);
        if (purity_drift) drift = std::max(drift, std::abs(rho.purity() - p0));
    }
    if (purity_drift) *purity_drift = drift;
    return out;
}

inline double mixed_pl(const model::PlParams& pl) {
    return model::pl_signal(linalg::DensityState::maximally_mixed(model::kNvDim), pl);
}

inline CampaignDataset simulate_campaign(const model::NvModel& m, const ProtocolConfig& cfg,
                                         const std::string& fixture = "custom") {
    m.validate();
    cfg.validate();
    const double nu_d = resolved_drive_frequency(m, cfg);
    const double pl_mix = mixed_pl(cfg.pl);

    CampaignDataset ds;
    ds.series.resize(cfg.amplitudes_mv.size());
    parallel_for(cfg.amplitudes_mv.size(), cfg.threads, [&](std::size_t a) {
        auto& s = ds.series[a];
        s.amplitude = cfg.amplitudes_mv[a];
        s.values = clean_pl_series(m, s.amplitude, nu_d, cfg);
        s.times.resize(cfg.n_periods);
        for (int n = 0; n < cfg.n_periods; ++n) {
            s.times[n] = n + 1;
            s.values[n] = decayed(s.values[n], pl_mix, n + 1, cfg.t_relax_periods);
        }
        if (cfg.noisy()) {
            auto rng = stream_for(cfg.seed, a);
            apply_shot_noise(s, cfg.shot_noise, cfg.pl.bright_level, rng);
        }
    });

    ds.metadata = {{"kind", "nv-campaign"},
                   {"observable", "pl"},
                   {"code_version", KTUPLE_VERSION},
                   {"fixture", fixture},
                   {"d_zfs_mhz", num(m.d_zfs_mhz)},
                   {"b_z_gauss", num(m.b_z_gauss)},
                   {"a_par_mhz", num(m.a_par_mhz)},
                   {"a_perp_mhz", num(m.a_perp_mhz)},
                   {"amplitude_calibration_g_per_mv", num(m.amplitude_calibration_g_per_mv)},
                   {"nu_d_mhz", num(nu_d)},
                   {"n_periods", std::to_string(cfg.n_periods)},
                   {"p_target", num(cfg.init.p_target)},
                   {"nuclear_share", num(cfg.init.nuclear_share)},
                   {"t_relax_periods", num(cfg.t_relax_periods)},
                   {"shot_noise", num(cfg.shot_noise)},
                   {"pl_bright", num(cfg.pl.bright_level)},
                   {"pl_dark", num(cfg.pl.dark_level)},
                   {"steps_per_period", std::to_string(cfg.integrator.steps_per_period)},
                   {"seed", std::to_string(cfg.seed)}};
    return ds;
}

// ------------------------------------------------------------------ two-level reference

struct TlsProtocol {
    std::vector<double> amplitudes_mhz;
    int n_periods = 200;
    double nu_d_mhz = 0.0;  // <= 0: in tune with the level spacing
    linalg::StateVector initial = model::tls_ground();
    double t_relax_periods = std::numeric_limits<double>::infinity();
    double noise_sigma = 0.0;  // additive Gaussian noise on <sigma_z>
    std::uint64_t seed = 1;
    floquet::IntegratorConfig integrator;
    int threads = 1;
};

// <sigma_z>(n T_d) for n = 1..N.
inline std::vector<double> tls_sigma_z_series(const model::TlsModel& m, double amplitude, double nu_d,
                                              const linalg::StateVector& psi0, int n_periods,
                                              const floquet::IntegratorConfig& cfg = {}) {
    const auto u = floquet::monodromy(floquet::tls_hamiltonian_fn(m, {amplitude, nu_d, 0.0}), nu_d, cfg);
    linalg::StateVector psi = linalg::normalized(psi0);
    std::vector<double> out(n_periods);
    for (int n = 0; n < n_periods; ++n) {
        psi = u * psi;
        out[n] = std::norm(psi(model::kTlsExcited)) - std::norm(psi(model::kTlsGround));
    }
    return out;
}

inline CampaignDataset reference_campaign_tls(const model::TlsModel& m, const TlsProtocol& cfg) {
    m.validate();
    if (cfg.n_periods < 1) throw ContractViolation("TlsProtocol: n_periods must be positive");
    const double nu_d = cfg.nu_d_mhz > 0.0 ? cfg.nu_d_mhz : m.level_spacing_mhz;
    CampaignDataset ds;
    ds.series.resize(cfg.amplitudes_mhz.size());
    parallel_for(cfg.amplitudes_mhz.size(), cfg.threads, [&](std::size_t a) {
        auto& s = ds.series[a];
        s.amplitude = cfg.amplitudes_mhz[a];
        s.values = tls_sigma_z_series(m, s.amplitude, nu_d, cfg.initial, cfg.n_periods, cfg.integrator);
        s.times.resize(cfg.n_periods);
        for (int n = 0; n < cfg.n_periods; ++n) {
            s.times[n] = n + 1;
            s.values[n] = decayed(s.values[n], 0.0, n + 1, cfg.t_relax_periods);
        }
        if (cfg.noise_sigma > 0.0) {
            auto rng = stream_for(cfg.seed, a);
            std::normal_distribution<double> g(0.0, cfg.noise_sigma);
            for (double& v : s.values) v += g(rng);
            s.sigma.emplace(s.size(), cfg.noise_sigma);
        }
    });
    ds.metadata = {{"kind", "tls-campaign"},
                   {"observable", "sigma_z"},
                   {"code_version", KTUPLE_VERSION},
                   {"delta0_mhz", num(m.level_spacing_mhz)},
                   {"nu_d_mhz", num(nu_d)},
                   {"n_periods", std::to_string(cfg.n_periods)},
                   {"t_relax_periods", num(cfg.t_relax_periods)},
                   {"noise_sigma", num(cfg.noise_sigma)},
                   {"steps_per_period", std::to_string(cfg.integrator.steps_per_period)},
                   {"seed", std::to_string(cfg.seed)}};
    return ds;
}

// ------------------------------------------------------------------ grids

// Rows = amplitudes, columns = DFT frequency (cycles per T_d).
inline HeatmapGrid dft_campaign(const CampaignDataset& ds) {
    HeatmapGrid g;
    for (const auto& s : ds.series) {
        const auto sp = signal::dft_magnitude(s);
        if (g.x.empty()) {
            for (const auto& b : sp) g.x.push_back(b.frequency);
        } else if (sp.size() != g.x.size()) {
            throw ContractViolation("dft_campaign: series lengths differ");
        }
        g.y.push_back(s.amplitude);
        for (const auto& b : sp) g.cells.push_back(b.magnitude);
    }
    g.auto_range();
    return g;
}

// Rows = amplitudes, columns = period index n.
inline HeatmapGrid series_grid(const CampaignDataset& ds) {
    HeatmapGrid g;
    for (const auto& s : ds.series) {
        if (g.x.empty()) {
            for (long n : s.times) g.x.push_back(static_cast<double>(n));
        } else if (s.size() != g.x.size()) {
            throw ContractViolation("series_grid: series lengths differ");
        }
        g.y.push_back(s.amplitude);
        g.cells.insert(g.cells.end(), s.values.begin(), s.values.end());
    }
    g.auto_range();
    return g;
}

}  // namespace ktuple::experiment
