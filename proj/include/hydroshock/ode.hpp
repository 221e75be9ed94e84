#pragma once
#include <type_traits>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

// Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)) over a
// small state type, with stored accepted nodes for dense evaluation by cubic
// Hermite interpolation. The state type needs axpy, a zero, and an inf-norm.

namespace hydroshock::ode {

template <class S>
struct StateOps;  // specialize for non-arithmetic state types

template <>
struct StateOps<double> {
    static double axpy(double a, double x, double y) { return a * x + y; }
    static double zero(double) { return 0.0; }
    static double norm(double x) { return std::abs(x); }
};

template <class T, std::size_t N>
struct StateOps<std::array<T, N>> {
    using S = std::array<T, N>;
    static S axpy(double a, const S& x, const S& y) {
        S r;
        for (std::size_t i = 0; i < N; ++i) r[i] = a * x[i] + y[i];
        return r;
    }
    static S zero(const S&) { return S{}; }
    static double norm(const S& x) {
        double m = 0;
        for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(x[i]));
        return m;
    }
};

struct Options {
    double rtol = 1e-10;
    double atol = 1e-13;
    double h_max = std::numeric_limits<double>::infinity();
    double h_init = 0.0;  // 0: choose automatically
    long max_steps = 4'000'000;
};

/// Accepted integration nodes; eval() interpolates with a cubic Hermite on
/// the bracketing step, using the stored exact node derivatives.
template <class S>
struct Solution {
    std::vector<double> x;
    std::vector<S> y;
    std::vector<S> f;
    bool stopped_early = false;  // stop predicate fired

    bool forward() const { return x.back() >= x.front(); }
    double x_end() const { return x.back(); }

    S eval(double xq) const {
        using Ops = StateOps<S>;
        const bool fwd = forward();
        if ((fwd && xq <= x.front()) || (!fwd && xq >= x.front())) return y.front();
        if ((fwd && xq >= x.back()) || (!fwd && xq <= x.back())) return y.back();
        std::size_t lo = 0, hi = x.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (fwd ? (x[mid] <= xq) : (x[mid] >= xq)) lo = mid; else hi = mid;
        }
        const double h = x[hi] - x[lo];
        const double t = (xq - x[lo]) / h;
        const double t2 = t * t, t3 = t2 * t;
        S r = Ops::axpy(2 * t3 - 3 * t2, y[lo], y[lo]);  // (1 + 2t^3 - 3t^2) y_lo
        r = Ops::axpy(-2 * t3 + 3 * t2, y[hi], r);
        r = Ops::axpy((t3 - 2 * t2 + t) * h, f[lo], r);
        r = Ops::axpy((t3 - t2) * h, f[hi], r);
        return r;
    }
};

// Dormand-Prince 5(4) tableau.
namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

/// Integrate y' = rhs(x, y) from x0 to x1 (either direction). `post_step`,
/// if provided, may rescale the state and its derivative in place after each
/// accepted step (for renormalized linear problems); `stop` ends early.
template <class S, class RHS>
Solution<S> integrate(RHS&& rhs, double x0, double x1, S y0, const Options& opt = {},
                      const std::function<bool(double, const std::type_identity_t<S>&)>& stop = nullptr,
                      const std::function<void(double, std::type_identity_t<S>&, std::type_identity_t<S>&)>&
                          post_step = nullptr) {
    using Ops = StateOps<S>;
    Solution<S> sol;
    const double dir = (x1 >= x0) ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    if (span == 0.0) {
        sol.x = {x0};
        sol.y = {y0};
        sol.f = {rhs(x0, y0)};
        return sol;
    }

    double h = opt.h_init > 0 ? opt.h_init : span / 100.0;
    h = std::min(h, opt.h_max);
    double x = x0;
    S y = y0;
    S k1 = rhs(x, y);
    sol.x.push_back(x);
    sol.y.push_back(y);
    sol.f.push_back(k1);

    auto comb = [&](const S& base, std::initializer_list<std::pair<double, const S*>> terms) {
        S r = base;
        for (auto& [c, k] : terms) r = Ops::axpy(c, *k, r);
        return r;
    };

    for (long it = 0; it < opt.max_steps; ++it) {
        if (dir * (x - x1) >= 0.0) return sol;
        h = std::min(h, opt.h_max);
        double hs = dir * std::min(h, std::abs(x1 - x));
        if (x + hs == x) throw std::runtime_error("ode::integrate: step underflow");
        const bool last = std::abs(hs) >= std::abs(x1 - x) * (1.0 - 1e-14);

        S k2 = rhs(x + dp::c2 * hs, comb(y, {{hs * dp::a21, &k1}}));
        S k3 = rhs(x + dp::c3 * hs, comb(y, {{hs * dp::a31, &k1}, {hs * dp::a32, &k2}}));
        S k4 = rhs(x + dp::c4 * hs,
                   comb(y, {{hs * dp::a41, &k1}, {hs * dp::a42, &k2}, {hs * dp::a43, &k3}}));
        S k5 = rhs(x + dp::c5 * hs,
                   comb(y, {{hs * dp::a51, &k1}, {hs * dp::a52, &k2}, {hs * dp::a53, &k3},
                            {hs * dp::a54, &k4}}));
        S k6 = rhs(x + hs,
                   comb(y, {{hs * dp::a61, &k1}, {hs * dp::a62, &k2}, {hs * dp::a63, &k3},
                            {hs * dp::a64, &k4}, {hs * dp::a65, &k5}}));
        S ynew = comb(y, {{hs * dp::b1, &k1}, {hs * dp::b3, &k3}, {hs * dp::b4, &k4},
                          {hs * dp::b5, &k5}, {hs * dp::b6, &k6}});
        S k7 = rhs(x + hs, ynew);

        S err = comb(Ops::zero(y), {{hs * dp::e1, &k1}, {hs * dp::e3, &k3}, {hs * dp::e4, &k4},
                                    {hs * dp::e5, &k5}, {hs * dp::e6, &k6}, {hs * dp::e7, &k7}});
        const double scale = opt.atol + opt.rtol * std::max(Ops::norm(y), Ops::norm(ynew));
        const double enorm = Ops::norm(err) / scale;

        if (enorm <= 1.0) {
            x += hs;
            y = ynew;
            k1 = k7;
            if (post_step) post_step(x, y, k1);
            sol.x.push_back(x);
            sol.y.push_back(y);
            sol.f.push_back(k1);
            if (stop && stop(x, y)) {
                sol.stopped_early = true;
                return sol;
            }
            if (last) return sol;
            const double fac = enorm > 0 ? 0.9 * std::pow(enorm, -0.2) : 5.0;
            h = std::abs(hs) * std::clamp(fac, 0.2, 5.0);
        } else {
            h = std::abs(hs) * std::clamp(0.9 * std::pow(enorm, -0.2), 0.1, 0.9);
        }
    }
    throw std::runtime_error("ode::integrate: max step count exceeded");
}

}  // namespace hydroshock::ode
