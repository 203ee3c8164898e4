#include <gtest/gtest.h>

#include <cmath>

#include "ktuple/experiment.hpp"
#include "ktuple/fixtures.hpp"
#include "ktuple/ktupling.hpp"

using namespace ktuple;
using namespace ktuple::experiment;

namespace {

const model::TlsModel kTls{1.0};

double a_p2() {
    static const double a = ktupling::find_amplitude(1, 2, 1.0, {}, kTls).amplitude;
    return a;
}

}  // namespace

TEST(Initial, PopulationsSumToOne) {
    for (double p : {0.0, 0.5, 0.95, 1.0}) {
        const auto pops = InitialState{p, 0.3}.populations();
        EXPECT_NEAR(pops.sum(), 1.0, 1e-12);
        EXPECT_DOUBLE_EQ(pops(model::nv_index(0, true)), p);
        EXPECT_NEAR(pops.sum() - p, 1.0 - p, 1e-12);
    }
    EXPECT_THROW((InitialState{1.2, 0.5}.validate()), ContractViolation);
}

TEST(TlsReference, FlipsBetweenGroundAndFlipState) {
    TlsProtocol pr;
    pr.amplitudes_mhz = {0.0, a_p2()};
    pr.n_periods = 20;
    const auto ds = reference_campaign_tls(kTls, pr);
    for (double v : ds.series[0].values) EXPECT_NEAR(v, -1.0, 1e-9);
    const auto& s = ds.series[1];
    for (int n = 0; n < 20; ++n) {
        if (n % 2 == 0) EXPECT_NEAR(s.values[n], 0.7099, 1e-3);
        else EXPECT_NEAR(s.values[n], -1.0, 1e-7);
    }
}

TEST(TlsReference, DecayTowardsZero) {
    TlsProtocol pr;
    pr.amplitudes_mhz = {a_p2()};
    pr.n_periods = 400;
    pr.t_relax_periods = 30.0;
    const auto s = reference_campaign_tls(kTls, pr).series[0];
    EXPECT_LT(std::abs(s.values[299]), 1e-4);
}

TEST(TlsReference, DftRidgeOnQuasiEnergyDifference) {
    TlsProtocol pr;
    for (int i = 0; i < 9; ++i) pr.amplitudes_mhz.push_back(0.1 + 0.1 * i);
    const auto ds = reference_campaign_tls(kTls, pr);
    const auto grid = dft_campaign(ds);
    ASSERT_EQ(grid.y.size(), 9u);
    for (std::size_t r = 0; r < ds.series.size(); ++r) {
        const auto sp = signal::dft_magnitude(ds.series[r]);
        const double expected = floquet::visible_frequency(floquet::qed(kTls, {ds.series[r].amplitude, 1.0, 0.0}));
        EXPECT_LE(std::abs(sp[signal::dominant_bin(sp)].frequency - expected), 1.0 / 400.0 + 1e-12);
    }
}

TEST(Campaign, TwoLevelLimitIsAffineInSigmaZ) {
    // No flip-flop term and no nuclear drive: the selected transition is a bare
    // two-level system apart from far-detuned m_S = +1 admixtures.
    auto nv = fixtures::paper_sim();
    nv.a_perp_mhz = 0.0;
    nv.nuclear_drive = false;
    const auto s = model::nv_eigenstructure(nv);
    ASSERT_NEAR(s.alpha_sq, 1.0, 1e-12);
    const double d0 = s.delta0_selected_mhz;
    const double a_rf = model::instrument_amplitude(nv, s, 0.3);

    ProtocolConfig cfg;
    cfg.amplitudes_mv = {a_rf};
    cfg.n_periods = 20;
    cfg.init = {1.0, 0.5};
    const auto ds = simulate_campaign(nv, cfg);
    EXPECT_FALSE(ds.series[0].sigma.has_value());

    const auto sz = tls_sigma_z_series({d0}, 0.3 * d0, d0, model::tls_ground(), 20);
    for (int n = 0; n < 20; ++n) {
        const double p0 = 0.5 * (1.0 - sz[n]);
        EXPECT_NEAR(ds.series[0].values[n], 0.7 + 0.3 * p0, 2e-3) << n;
    }
}

TEST(Campaign, PeriodDoublingPatternAtCalibratedRoot) {
    const auto nv = fixtures::paper_sim();
    const auto p = ktupling::find_amplitude_nv(1, 2, nv, {});
    ProtocolConfig cfg;
    cfg.amplitudes_mv = {p.amplitude};
    cfg.n_periods = 40;
    const auto s = simulate_campaign(nv, cfg).series[0];
    // Alternating: strong odd/even contrast, weak drift within each parity.
    double contrast = 0.0, drift = 0.0;
    for (int n = 0; n + 2 < 40; ++n) {
        contrast = std::max(contrast, std::abs(s.values[n + 1] - s.values[n]));
        drift = std::max(drift, std::abs(s.values[n + 2] - s.values[n]));
    }
    EXPECT_GT(contrast, 0.1);
    EXPECT_LT(drift, 0.5 * contrast);
}

TEST(Campaign, UnitaryCoreKeepsPurity) {
    const auto nv = fixtures::paper_sim();
    ProtocolConfig cfg;
    cfg.n_periods = 200;
    double drift = 1.0;
    clean_pl_series(nv, 30.0, 7.5, cfg, &drift);
    EXPECT_LT(drift, 1e-8);
}

TEST(Campaign, DecayConvergesToMixedLevel) {
    const auto nv = fixtures::paper_sim();
    ProtocolConfig cfg;
    cfg.amplitudes_mv = {20.0};
    cfg.t_relax_periods = 20.0;
    cfg.n_periods = 200;
    const auto s = simulate_campaign(nv, cfg).series[0];
    const double mix = mixed_pl(cfg.pl);
    EXPECT_NEAR(s.values[199] / mix, 1.0, 1e-4);
}

TEST(Campaign, SeededAndSchedulingIndependent) {
    const auto nv = fixtures::paper_sim();
    ProtocolConfig cfg;
    cfg.amplitudes_mv = {10.0, 20.0, 30.0};
    cfg.n_periods = 30;
    cfg.shot_noise = 500.0;
    cfg.t_relax_periods = 100.0;
    cfg.seed = 42;
    const auto a = simulate_campaign(nv, cfg);
    cfg.threads = 3;
    const auto b = simulate_campaign(nv, cfg);
    for (std::size_t i = 0; i < a.series.size(); ++i) {
        EXPECT_EQ(a.series[i].values, b.series[i].values);
        EXPECT_EQ(*a.series[i].sigma, *b.series[i].sigma);
    }
    cfg.seed = 43;
    EXPECT_NE(simulate_campaign(nv, cfg).series[0].values, a.series[0].values);
}

TEST(ShotNoise, MeanConvergesToDecayedSignal) {
    signal::StroboscopicSeries clean;
    clean.times = {1, 2, 3};
    clean.values = {0.95, 0.8, 0.72};
    const double shots = 200.0;
    const int draws = 10000;
    std::vector<double> mean(3, 0.0);
    for (int seed = 0; seed < draws; ++seed) {
        auto s = clean;
        auto rng = stream_for(static_cast<std::uint64_t>(seed), 0);
        apply_shot_noise(s, shots, 1.0, rng);
        for (int i = 0; i < 3; ++i) mean[i] += s.values[i] / draws;
    }
    for (int i = 0; i < 3; ++i) {
        const double sigma = std::sqrt(clean.values[i] * shots) / shots;
        EXPECT_LT(std::abs(mean[i] - clean.values[i]), 3.0 * sigma / std::sqrt(double(draws)));
    }
}

TEST(Grids, SeriesGridLayout) {
    TlsProtocol pr;
    pr.amplitudes_mhz = {0.1, 0.2};
    pr.n_periods = 10;
    const auto g = series_grid(reference_campaign_tls(kTls, pr));
    EXPECT_EQ(g.x.size(), 10u);
    EXPECT_EQ(g.y.size(), 2u);
    EXPECT_DOUBLE_EQ(g.x.front(), 1.0);
    EXPECT_LE(g.vmin, g.vmax);
}

TEST(Metadata, RecordsProvenance) {
    ProtocolConfig cfg;
    cfg.amplitudes_mv = {5.0};
    cfg.n_periods = 10;
    cfg.seed = 9;
    const auto ds = simulate_campaign(fixtures::paper_sim(), cfg, "paper-sim");
    auto has = [&](const std::string& k, const std::string& v) {
        for (const auto& [key, val] : ds.metadata)
            if (key == k) return val == v;
        return false;
    };
    EXPECT_TRUE(has("fixture", "paper-sim"));
    EXPECT_TRUE(has("seed", "9"));
    EXPECT_TRUE(has("code_version", KTUPLE_VERSION));
}
