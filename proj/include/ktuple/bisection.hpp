#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace ktuple {

struct Bracket {
    double lo, hi;
    double f_lo, f_hi;
};

struct BisectionResult {
    double x;
    double fx;
    int iterations;
};

// Plain bisection on a bracket with f_lo * f_hi <= 0. Stops when |f| <= f_tol
// and the bracket is narrower than x_tol, or after max_iter halvings.
template <typename F>
BisectionResult bisect(F&& f, Bracket b, int max_iter, double x_tol, double f_tol = 0.0) {
    if (b.f_lo == 0.0) return {b.lo, 0.0, 0};
    if (b.f_hi == 0.0) return {b.hi, 0.0, 0};
    double mid = 0.5 * (b.lo + b.hi);
    double f_mid = f(mid);
    int it = 1;
    for (; it < max_iter; ++it) {
        if (f_mid == 0.0 || (std::abs(b.hi - b.lo) <= x_tol && std::abs(f_mid) <= f_tol)) break;
        if ((f_mid < 0.0) == (b.f_lo < 0.0)) {
            b.lo = mid;
            b.f_lo = f_mid;
        } else {
            b.hi = mid;
            b.f_hi = f_mid;
        }
        mid = 0.5 * (b.lo + b.hi);
        f_mid = f(mid);
    }
    return {mid, f_mid, it};
}

// Sign-change brackets between consecutive grid samples. When max_jump is set,
// pairs whose values are both larger than it in magnitude are treated as
// discontinuities (for wrapped residuals) rather than roots.
inline std::vector<Bracket> sign_change_brackets(const std::vector<double>& xs, const std::vector<double>& fs,
                                                 std::optional<double> max_jump = std::nullopt) {
    std::vector<Bracket> out;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double a = fs[i], b = fs[i + 1];
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        const bool change = (a == 0.0) || (a < 0.0) != (b < 0.0);
        if (!change || (b == 0.0 && i + 2 < xs.size())) continue;  // exact zero at b: counted on next pair
        if (max_jump && std::abs(a) > *max_jump && std::abs(b) > *max_jump) continue;
        out.push_back({xs[i], xs[i + 1], a, b});
    }
    return out;
}

}  // namespace ktuple
