// signal.hpp: stroboscopic series analysis
//
// DFT spectra, subsequence decomposition, damped-cosine fits of the slow
// modulation and V-shaped hyperbola fits 1/tau = |A - A_P| / C.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ktuple/errors.hpp"
#include "ktuple/linalg.hpp"
#include "ktuple/parallel.hpp"

namespace ktuple::signal {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct StroboscopicSeries {
    double amplitude = 0.0;
    std::vector<long> times;  // units of T_d
    std::vector<double> values;
    std::optional<std::vector<double>> sigma;

    [[nodiscard]] std::size_t size() const { return values.size(); }

    void validate() const {
        if (times.size() != values.size()) throw ContractViolation("series: times and values differ in length");
        if (sigma && sigma->size() != values.size()) throw ContractViolation("series: sigma length mismatch");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (times[i] <= times[i - 1]) throw ContractViolation("series: times must be strictly increasing");
    }

    // Common spacing of the time stamps; throws unless uniform.
    [[nodiscard]] long stride() const {
        if (times.size() < 2) throw ContractViolation("series: need at least two samples");
        const long s = times[1] - times[0];
        for (std::size_t i = 2; i < times.size(); ++i)
            if (times[i] - times[i - 1] != s) throw ContractViolation("series: non-uniform sampling");
        return s;
    }
};

// ------------------------------------------------------------------ spectrum

struct SpectrumBin {
    double frequency;  // cycles per T_d
    double magnitude;
};
using Spectrum = std::vector<SpectrumBin>;

// One-sided magnitude spectrum of the mean-removed series. Bins are scaled so
// that sum(magnitude^2) = (N/2) * variance.
inline Spectrum dft_magnitude(const StroboscopicSeries& s) {
    s.validate();
    const std::size_t n = s.size();
    if (n < 8) throw ContractViolation("dft_magnitude: need at least 8 samples");
    const long stride = s.stride();
    const double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(n);

    Spectrum out;
    out.reserve(n / 2 + 1);
    for (std::size_t b = 0; b <= n / 2; ++b) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            // Index reduction keeps the twiddle argument small.
            const double ph = -linalg::kTwoPi * static_cast<double>((b * i) % n) / static_cast<double>(n);
            acc += (s.values[i] - mean) * std::polar(1.0, ph);
        }
        const bool edge = b == 0 || 2 * b == n;
        const double w = edge ? 1.0 : 2.0;
        out.push_back({static_cast<double>(b) / (static_cast<double>(n) * stride),
                       std::abs(acc) * std::sqrt(w / (2.0 * static_cast<double>(n)))});
    }
    return out;
}

inline std::size_t dominant_bin(const Spectrum& sp) {
    if (sp.empty()) throw ContractViolation("dominant_bin: empty spectrum");
    std::size_t best = 0;
    for (std::size_t i = 1; i < sp.size(); ++i)
        if (sp[i].magnitude > sp[best].magnitude) best = i;
    return best;
}

// Local maxima (excluding the DC bin) at or above rel_threshold * max.
inline std::vector<std::size_t> spectral_peaks(const Spectrum& sp, double rel_threshold = 0.05) {
    std::vector<std::size_t> peaks;
    if (sp.size() < 2) return peaks;
    double top = 0.0;
    for (std::size_t i = 1; i < sp.size(); ++i) top = std::max(top, sp[i].magnitude);
    if (!(top > 0.0)) return peaks;
    for (std::size_t i = 1; i < sp.size(); ++i) {
        const double m = sp[i].magnitude;
        const double left = sp[i - 1].magnitude;
        const double right = i + 1 < sp.size() ? sp[i + 1].magnitude : -1.0;
        if (m >= rel_threshold * top && m > left && m >= right) peaks.push_back(i);
    }
    return peaks;
}

inline int count_spectral_peaks(const Spectrum& sp, double rel_threshold = 0.05) {
    return static_cast<int>(spectral_peaks(sp, rel_threshold).size());
}

// ------------------------------------------------------------------ subsequences

// Subsequence l (1..k) holds the samples with n = l (mod k).
inline std::vector<StroboscopicSeries> decompose_subsequences(const StroboscopicSeries& s, int k) {
    s.validate();
    if (k < 1) throw ContractViolation("decompose_subsequences: k must be positive");
    std::vector<StroboscopicSeries> out(k);
    for (int l = 0; l < k; ++l) {
        out[l].amplitude = s.amplitude;
        if (s.sigma) out[l].sigma.emplace();
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        long r = s.times[i] % k;
        if (r < 0) r += k;
        const int l = r == 0 ? k - 1 : static_cast<int>(r) - 1;
        out[l].times.push_back(s.times[i]);
        out[l].values.push_back(s.values[i]);
        if (s.sigma) out[l].sigma->push_back((*s.sigma)[i]);
    }
    return out;
}

// ------------------------------------------------------------------ damped cosine

// y(n) = offset + amplitude exp(-n / decay_time) cos(2 pi n / tau + phase)
struct DampedCosineFit {
    double offset = 0.0;
    double amplitude = 0.0;
    double tau = kInf;
    double tau_sigma = kInf;
    double decay_time = kInf;
    double phase = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;

    [[nodiscard]] bool infinite_period() const { return !std::isfinite(tau); }
};

struct FitSeeds {
    double offset = 0.0;
    double amplitude = 0.0;
    double tau = 0.0;
    double decay_time = kInf;
    double phase = 0.0;
};

struct FitOptions {
    int max_iterations = 200;
    double step_tolerance = 1e-8;
};

namespace detail {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// Internal parametrization on the local sample index u = (n - n0) / stride:
// p = (offset, a, b, f, lambda), y = offset + exp(-lambda u)(a cos 2 pi f u + b sin 2 pi f u).
struct LocalProblem {
    std::vector<double> u, y, w;  // w = 1 / sigma

    [[nodiscard]] double model(const Vec5& p, double ui) const {
        const double e = std::exp(-p(4) * ui);
        const double arg = linalg::kTwoPi * p(3) * ui;
        return p(0) + e * (p(1) * std::cos(arg) + p(2) * std::sin(arg));
    }

    [[nodiscard]] double cost(const Vec5& p) const {
        double c = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double r = w[i] * (y[i] - model(p, u[i]));
            c += r * r;
        }
        return c;
    }

    // Normal equations J^T J and J^T r for weighted residuals.
    void normal(const Vec5& p, Mat5& jtj, Vec5& jtr) const {
        jtj.setZero();
        jtr.setZero();
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double e = std::exp(-p(4) * u[i]);
            const double arg = linalg::kTwoPi * p(3) * u[i];
            const double c = std::cos(arg), s = std::sin(arg);
            Vec5 g;
            g << 1.0, e * c, e * s, e * linalg::kTwoPi * u[i] * (p(2) * c - p(1) * s), -u[i] * e * (p(1) * c + p(2) * s);
            g *= w[i];
            const double r = w[i] * (y[i] - model(p, u[i]));
            jtj.noalias() += g * g.transpose();
            jtr.noalias() += g * r;
        }
    }

    // Best undamped (offset, a, b) at fixed frequency; returns the cost.
    double linear_at(double f, Vec5& p) const {
        Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
        Eigen::Vector3d aty = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double arg = linalg::kTwoPi * f * u[i];
            const Eigen::Vector3d row(w[i], w[i] * std::cos(arg), w[i] * std::sin(arg));
            ata.noalias() += row * row.transpose();
            aty += row * (w[i] * y[i]);
        }
        const Eigen::Vector3d x = ata.ldlt().solve(aty);
        p << x(0), x(1), x(2), f, 0.0;
        return x.allFinite() ? cost(p) : kInf;
    }
};

}  // namespace detail

inline DampedCosineFit fit_damped_cosine(const StroboscopicSeries& s, const std::optional<FitSeeds>& seeds = {},
                                         const FitOptions& opt = {}) {
    s.validate();
    const std::size_t m = s.size();
    if (m < 10) throw ContractViolation("fit_damped_cosine: need at least 10 samples");
    const long stride = s.stride();
    const double n0 = static_cast<double>(s.times.front());
    const double sd = static_cast<double>(stride);

    detail::LocalProblem prob;
    prob.u.resize(m);
    prob.y = s.values;
    prob.w.assign(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        prob.u[i] = static_cast<double>(i);
        if (s.sigma) {
            const double sg = (*s.sigma)[i];
            if (!(sg > 0.0) || !std::isfinite(sg)) throw ContractViolation("fit_damped_cosine: sigma must be positive");
            prob.w[i] = 1.0 / sg;
        }
    }

    const double mean = std::accumulate(prob.y.begin(), prob.y.end(), 0.0) / static_cast<double>(m);
    double var = 0.0, mean_sigma2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        var += (prob.y[i] - mean) * (prob.y[i] - mean);
        mean_sigma2 += 1.0 / (prob.w[i] * prob.w[i]);
    }
    var /= static_cast<double>(m);
    mean_sigma2 /= static_cast<double>(m);
    const double floor = 1e-20 * std::max(1.0, mean * mean) + (s.sigma ? 1e-2 * mean_sigma2 : 0.0);

    DampedCosineFit out;
    out.offset = mean;
    if (var <= floor) {
        out.rms_residual = std::sqrt(var);
        return out;
    }

    detail::Vec5 p;
    if (seeds && seeds->tau > 0.0 && std::isfinite(seeds->tau)) {
        // Convert user-frame seeds into the local frame.
        const double f = sd / seeds->tau;
        const double lam = std::isfinite(seeds->decay_time) && seeds->decay_time > 0.0 ? sd / seeds->decay_time : 0.0;
        const double r = seeds->amplitude * std::exp(-lam * n0 / sd);
        const double theta = -(seeds->phase + linalg::kTwoPi * n0 / seeds->tau);
        p << seeds->offset, r * std::cos(theta), r * std::sin(theta), f, lam;
    } else {
        // DFT peak, then a fine variable-projection scan over frequency.
        StroboscopicSeries local = s;
        const auto sp = dft_magnitude(local);
        const double f_peak = sp[dominant_bin(sp)].frequency * sd;
        double best = kInf;
        detail::Vec5 trial;
        const double df = 0.02 / static_cast<double>(m);
        for (double f = df; f <= 0.5 + 1e-12; f += df) {
            const double c = prob.linear_at(f, trial);
            if (c < best) {
                best = c;
                p = trial;
            }
        }
        if (f_peak > 0.0 && prob.linear_at(f_peak, trial) < best) p = trial;
    }

    // Levenberg-Marquardt.
    const double amp_scale = std::sqrt(var) + 1e-300;
    const detail::Vec5 typical(amp_scale, amp_scale, amp_scale, 1.0 / static_cast<double>(m), 1.0 / static_cast<double>(m));
    double mu = 1e-3;
    double cost = prob.cost(p);
    detail::Mat5 jtj;
    detail::Vec5 jtr;
    prob.normal(p, jtj, jtr);
    for (out.iterations = 1; out.iterations <= opt.max_iterations; ++out.iterations) {
        detail::Mat5 a = jtj;
        for (int i = 0; i < 5; ++i) a(i, i) += mu * std::max(jtj(i, i), 1e-300);
        const detail::Vec5 step = a.ldlt().solve(jtr);
        if (!step.allFinite()) break;
        double rel = 0.0;
        for (int i = 0; i < 5; ++i) rel = std::max(rel, std::abs(step(i)) / std::max(std::abs(p(i)), typical(i)));
        const detail::Vec5 trial = p + step;
        const double c = prob.cost(trial);
        if (c <= cost) {
            p = trial;
            cost = c;
            mu = std::max(mu / 3.0, 1e-12);
            prob.normal(p, jtj, jtr);
            if (rel < opt.step_tolerance) {
                out.converged = true;
                break;
            }
        } else {
            mu *= 4.0;
            if (rel < opt.step_tolerance) {  // no representable improvement left
                out.converged = true;
                break;
            }
            if (mu > 1e16) break;
        }
    }

    // Fold a negative frequency into the positive branch.
    if (p(3) < 0.0) {
        p(3) = -p(3);
        p(2) = -p(2);
    }

    const double f = p(3), lam = p(4);
    const double r = std::hypot(p(1), p(2));
    const double theta = std::atan2(p(2), p(1));
    out.offset = p(0);
    out.rms_residual = std::sqrt(cost / static_cast<double>(m));
    if (!(f > 0.0)) {
        out.converged = false;
        return out;
    }
    out.tau = sd / f;
    out.decay_time = lam > 0.0 ? sd / lam : kInf;
    out.amplitude = r * std::exp(lam * n0 / sd);
    out.phase = linalg::fold_phase(-theta - linalg::kTwoPi * n0 / out.tau);
    if (out.phase > std::numbers::pi) out.phase -= linalg::kTwoPi;

    // Covariance scaled by the reduced chi-square.
    const double dof = static_cast<double>(m) - 5.0;
    const double chi2_red = dof > 0.0 ? cost / dof : 0.0;
    const detail::Mat5 cov = jtj.inverse() * chi2_red;
    const double sf = std::sqrt(std::max(cov(3, 3), 0.0));
    out.tau_sigma = std::isfinite(sf) ? sd * sf / (f * f) : kInf;
    if (!out.converged || !(out.tau > 0.0)) out.converged = out.converged && out.tau > 0.0;
    return out;
}

inline FitSeeds seeds_from(const DampedCosineFit& f) {
    return {f.offset, f.amplitude, f.tau, f.decay_time, f.phase};
}

// ------------------------------------------------------------------ hyperbola

struct PeriodPoint {
    double amplitude;
    double tau;
    double tau_sigma = 0.0;  // <= 0: unit weight in 1/tau
};

// 1/tau = |A - A_P| / C with distinct C on each side of the apex.
struct HyperbolaFit {
    double a_p = 0.0;
    double sigma_a_p = 0.0;
    std::optional<double> c_minus, c_plus;
    double sigma_c_minus = 0.0, sigma_c_plus = 0.0;
    double rms_residual = 0.0;
    int n_minus = 0, n_plus = 0;

    [[nodiscard]] bool two_branch() const { return c_minus.has_value() && c_plus.has_value(); }

    // Mean of the available branch coefficients.
    [[nodiscard]] double c_mean() const {
        if (two_branch()) return 0.5 * (*c_minus + *c_plus);
        return c_minus ? *c_minus : *c_plus;
    }
    [[nodiscard]] double sigma_c_mean() const {
        if (two_branch()) return 0.5 * std::hypot(sigma_c_minus, sigma_c_plus);
        return c_minus ? sigma_c_minus : sigma_c_plus;
    }
};

namespace detail {

struct LinePoint {
    double x, y, w;  // w = 1 / sigma_y^2
};

struct TwoBranch {
    double a_p, s_minus, s_plus, chi2;
    Eigen::Matrix3d cov_unscaled;
    bool ok;
};

// Gauss-Newton on (A_P, s-, s+) with the side of each point fixed by `split`
// (points [0, split) left of the apex).
inline TwoBranch fit_two_branch(const std::vector<LinePoint>& pts, std::size_t split) {
    auto line = [](const std::vector<LinePoint>& v, std::size_t lo, std::size_t hi, double& a, double& b) {
        double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            sw += v[i].w;
            sx += v[i].w * v[i].x;
            sy += v[i].w * v[i].y;
            sxx += v[i].w * v[i].x * v[i].x;
            sxy += v[i].w * v[i].x * v[i].y;
        }
        const double det = sw * sxx - sx * sx;
        b = (sw * sxy - sx * sy) / det;
        a = (sy - b * sx) / sw;
    };
    double a1, b1, a2, b2;
    line(pts, 0, split, a1, b1);
    line(pts, split, pts.size(), a2, b2);
    TwoBranch r{0, -b1, b2, kInf, Eigen::Matrix3d::Zero(), false};
    r.a_p = (b1 != b2) ? (a2 - a1) / (b1 - b2) : 0.5 * (pts[split - 1].x + pts[split].x);
    if (!std::isfinite(r.a_p)) return r;

    Eigen::Vector3d p(r.a_p, r.s_minus, r.s_plus);
    for (int it = 0; it < 100; ++it) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const bool left = i < split;
            Eigen::Vector3d g;
            double model;
            if (left) {
                model = p(1) * (p(0) - pts[i].x);
                g << p(1), p(0) - pts[i].x, 0.0;
            } else {
                model = p(2) * (pts[i].x - p(0));
                g << -p(2), 0.0, pts[i].x - p(0);
            }
            jtj += pts[i].w * g * g.transpose();
            jtr += pts[i].w * g * (pts[i].y - model);
        }
        const Eigen::Vector3d step = jtj.ldlt().solve(jtr);
        if (!step.allFinite()) return r;
        p += step;
        r.cov_unscaled = jtj.inverse();
        if (step.norm() <= 1e-15 * (p.norm() + 1e-300)) break;
    }
    // Final covariance at the solution.
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    double chi2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool left = i < split;
        Eigen::Vector3d g;
        double model;
        if (left) {
            model = p(1) * (p(0) - pts[i].x);
            g << p(1), p(0) - pts[i].x, 0.0;
        } else {
            model = p(2) * (pts[i].x - p(0));
            g << -p(2), 0.0, pts[i].x - p(0);
        }
        jtj += pts[i].w * g * g.transpose();
        chi2 += pts[i].w * (pts[i].y - model) * (pts[i].y - model);
    }
    r.a_p = p(0);
    r.s_minus = p(1);
    r.s_plus = p(2);
    r.chi2 = chi2;
    r.cov_unscaled = jtj.inverse();
    // Apex must sit inside the gap of its split.
    r.ok = r.s_minus > 0.0 && r.s_plus > 0.0 && r.a_p >= pts[split - 1].x && r.a_p <= pts[split].x &&
           r.cov_unscaled.allFinite();
    return r;
}

}  // namespace detail

inline HyperbolaFit fit_hyperbola(std::vector<PeriodPoint> points) {
    if (points.size() < 2) throw InsufficientDataError("fit_hyperbola: need at least two points");
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.amplitude < b.amplitude; });
    if (points.front().amplitude == points.back().amplitude)
        throw ContractViolation("fit_hyperbola: all points share one amplitude");

    std::vector<detail::LinePoint> pts;
    for (const auto& p : points) {
        if (!(p.tau > 0.0) || !std::isfinite(p.tau)) throw ContractViolation("fit_hyperbola: tau must be finite and positive");
        const double sy = p.tau_sigma > 0.0 ? p.tau_sigma / (p.tau * p.tau) : 1.0;
        pts.push_back({p.amplitude, 1.0 / p.tau, 1.0 / (sy * sy)});
    }
    const std::size_t n = pts.size();

    // Single straight line (one branch).
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& q : pts) {
        sw += q.w;
        sx += q.w * q.x;
        sy += q.w * q.y;
        sxx += q.w * q.x * q.x;
        sxy += q.w * q.x * q.y;
    }
    const double det = sw * sxx - sx * sx;
    const double slope = (sw * sxy - sx * sy) / det;
    const double icpt = (sy - slope * sx) / sw;
    double chi2_single = 0.0;
    for (const auto& q : pts) chi2_single += q.w * std::pow(q.y - (icpt + slope * q.x), 2);

    std::optional<detail::TwoBranch> best;
    std::size_t best_split = 0;
    for (std::size_t split = 2; split + 2 <= n; ++split) {
        if (pts[split - 1].x == pts[split].x) continue;
        const auto r = detail::fit_two_branch(pts, split);
        if (r.ok && (!best || r.chi2 < best->chi2)) {
            best = r;
            best_split = split;
        }
    }

    HyperbolaFit out;
    if (best && best->chi2 <= chi2_single) {
        const double dof = static_cast<double>(n) - 3.0;
        const double scale = dof > 0.0 ? best->chi2 / dof : 0.0;
        const Eigen::Matrix3d cov = best->cov_unscaled * scale;
        out.a_p = best->a_p;
        out.sigma_a_p = std::sqrt(std::max(cov(0, 0), 0.0));
        out.c_minus = 1.0 / best->s_minus;
        out.c_plus = 1.0 / best->s_plus;
        out.sigma_c_minus = std::sqrt(std::max(cov(1, 1), 0.0)) / (best->s_minus * best->s_minus);
        out.sigma_c_plus = std::sqrt(std::max(cov(2, 2), 0.0)) / (best->s_plus * best->s_plus);
        out.rms_residual = std::sqrt(best->chi2 / static_cast<double>(n));
        out.n_minus = static_cast<int>(best_split);
        out.n_plus = static_cast<int>(n - best_split);
        return out;
    }

    if (slope == 0.0) throw InsufficientDataError("fit_hyperbola: flat 1/tau, no apex");
    const double dof = static_cast<double>(n) - 2.0;
    const double scale = dof > 0.0 ? chi2_single / dof : 0.0;
    // cov of (icpt, slope) for weighted line fit
    const double var_b = scale * sw / det;
    const double var_a = scale * sxx / det;
    const double cov_ab = -scale * sx / det;
    out.a_p = -icpt / slope;
    // A_P = -a / b
    const double da = -1.0 / slope, db = icpt / (slope * slope);
    out.sigma_a_p = std::sqrt(std::max(da * da * var_a + db * db * var_b + 2.0 * da * db * cov_ab, 0.0));
    const double c = 1.0 / std::abs(slope);
    const double sc = std::sqrt(std::max(var_b, 0.0)) / (slope * slope);
    if (slope > 0.0) {
        out.c_plus = c;
        out.sigma_c_plus = sc;
        out.n_plus = static_cast<int>(n);
    } else {
        out.c_minus = c;
        out.sigma_c_minus = sc;
        out.n_minus = static_cast<int>(n);
    }
    out.rms_residual = std::sqrt(chi2_single / static_cast<double>(n));
    return out;
}

// ------------------------------------------------------------------ pipeline

struct AnalysisOptions {
    double max_tau_fraction = 0.5;     // drop tau > fraction * N (unresolved)
    double relative_sigma_floor = 1e-3;  // sigma_tau >= floor * tau
    int min_per_branch = 2;
    int threads = 1;
};

struct AmplitudeFit {
    double amplitude;
    DampedCosineFit fit;
    bool used = false;
};

struct SubsequenceAnalysis {
    int l = 1;
    std::vector<AmplitudeFit> fits;
    HyperbolaFit hyperbola;
};

struct KTuplingAnalysis {
    int k = 2;
    std::vector<SubsequenceAnalysis> subsequences;
    double a_pk = 0.0, sigma_a_pk = 0.0;
    double c_k = 0.0, sigma_c_k = 0.0;
    bool consistent = true;  // pairwise subsequence A_Pk within 3 sigma
};

namespace detail {

// Inverse-variance mean; plain mean when any sigma vanishes.
inline std::pair<double, double> weighted_mean(const std::vector<double>& v, const std::vector<double>& s) {
    bool plain = false;
    for (double x : s) plain = plain || !(x > 0.0) || !std::isfinite(x);
    if (plain) {
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double sd = 0.0;
        for (double x : s) sd = std::max(sd, std::isfinite(x) ? x : 0.0);
        return {m, sd};
    }
    double sw = 0.0, swx = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = 1.0 / (s[i] * s[i]);
        sw += w;
        swx += w * v[i];
    }
    return {swx / sw, 1.0 / std::sqrt(sw)};
}

}  // namespace detail

inline KTuplingAnalysis analyze_ktupling(const std::vector<StroboscopicSeries>& dataset, int k,
                                         const AnalysisOptions& opt = {}) {
    if (k < 1) throw ContractViolation("analyze_ktupling: k must be positive");
    if (dataset.empty()) throw InsufficientDataError("analyze_ktupling: empty dataset");

    KTuplingAnalysis out;
    out.k = k;
    out.subsequences.resize(k);
    for (int l = 0; l < k; ++l) {
        out.subsequences[l].l = l + 1;
        out.subsequences[l].fits.resize(dataset.size());
    }

    parallel_for(dataset.size(), opt.threads, [&](std::size_t a) {
        const auto parts = decompose_subsequences(dataset[a], k);
        for (int l = 0; l < k; ++l) {
            auto& slot = out.subsequences[l].fits[a];
            slot.amplitude = dataset[a].amplitude;
            if (parts[l].size() < 10) continue;
            slot.fit = fit_damped_cosine(parts[l]);
        }
    });

    std::vector<double> aps, ap_sig, cs, c_sig;
    for (auto& sub : out.subsequences) {
        std::vector<PeriodPoint> pts;
        for (std::size_t a = 0; a < sub.fits.size(); ++a) {
            auto& af = sub.fits[a];
            const double window = static_cast<double>(dataset[a].size());
            if (!af.fit.converged || af.fit.infinite_period() || af.fit.tau > opt.max_tau_fraction * window) continue;
            af.used = true;
            const double sig = std::max(af.fit.tau_sigma, opt.relative_sigma_floor * af.fit.tau);
            pts.push_back({af.amplitude, af.fit.tau, sig});
        }
        if (pts.size() < 2) throw InsufficientDataError("analyze_ktupling: fewer than 2 usable amplitudes in subsequence " +
                                                         std::to_string(sub.l));
        sub.hyperbola = fit_hyperbola(pts);
        const auto& h = sub.hyperbola;
        if ((h.c_minus && h.n_minus < opt.min_per_branch) || (h.c_plus && h.n_plus < opt.min_per_branch))
            throw InsufficientDataError("analyze_ktupling: fewer than " + std::to_string(opt.min_per_branch) +
                                        " usable amplitudes on a branch of subsequence " + std::to_string(sub.l));
        aps.push_back(h.a_p);
        ap_sig.push_back(h.sigma_a_p);
        cs.push_back(h.c_mean());
        c_sig.push_back(h.sigma_c_mean());
    }

    std::tie(out.a_pk, out.sigma_a_pk) = detail::weighted_mean(aps, ap_sig);
    std::tie(out.c_k, out.sigma_c_k) = detail::weighted_mean(cs, c_sig);
    for (std::size_t i = 0; i < aps.size(); ++i)
        for (std::size_t j = i + 1; j < aps.size(); ++j)
            if (std::abs(aps[i] - aps[j]) > 3.0 * std::hypot(ap_sig[i], ap_sig[j])) out.consistent = false;
    return out;
}

// ------------------------------------------------------------------ report

// "35.844 ± 0.018"
inline std::string format_pm(double value, double sigma, int decimals = 3) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.*f \xC2\xB1 %.*f", decimals, value, decimals, sigma);
    return buf;
}

struct ReportRow {
    int k;
    double a_pk, sigma_a_pk;
    double c_k, sigma_c_k;
};

inline std::string format_report(const std::vector<ReportRow>& rows, const std::string& amplitude_unit = "mV",
                                 int decimals = 3) {
    std::string s = "k | A_Pk (" + amplitude_unit + ") | C_k/T_d (" + amplitude_unit + ")\n";
    for (const auto& r : rows) {
        s += std::to_string(r.k) + " | " + format_pm(r.a_pk, r.sigma_a_pk, decimals) + " | " +
             format_pm(r.c_k, r.sigma_c_k, decimals) + "\n";
    }
    return s;
}

inline std::pair<double, double> parse_pm(const std::string& field) {
    const std::string pm = "\xC2\xB1";
    const auto pos = field.find(pm);
    if (pos == std::string::npos) throw ParseError("expected 'value \xC2\xB1 sigma': " + field, 0);
    try {
        return {std::stod(field.substr(0, pos)), std::stod(field.substr(pos + pm.size()))};
    } catch (const std::exception&) {
        throw ParseError("bad number in '" + field + "'", 0);
    }
}

inline std::vector<ReportRow> parse_report(const std::string& text) {
    std::vector<ReportRow> rows;
    std::size_t start = 0;
    int line_no = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line_no == 1 || line.empty()) continue;
        std::vector<std::string> cols;
        std::size_t p = 0;
        for (std::size_t bar; (bar = line.find('|', p)) != std::string::npos; p = bar + 1) cols.push_back(line.substr(p, bar - p));
        cols.push_back(line.substr(p));
        if (cols.size() != 3) throw ParseError("expected 3 columns", line_no);
        ReportRow r{};
        try {
            r.k = std::stoi(cols[0]);
            std::tie(r.a_pk, r.sigma_a_pk) = parse_pm(cols[1]);
            std::tie(r.c_k, r.sigma_c_k) = parse_pm(cols[2]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        } catch (const std::exception&) {
            throw ParseError("bad k column", line_no);
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace ktuple::signal
