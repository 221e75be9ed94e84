#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hydroshock/profile.hpp"
#include "hydroshock/wave_family.hpp"

// Essential/absolute spectrum geometry at the endstates: spatial eigenvalues
// of the first-order eigenvalue ODE, weighted essential-spectrum boundary
// curves, branch points, absolute-spectrum half-lines, the admissible left
// weight window and the optimal essential spectral gap.

namespace hydroshock {

using complexd = std::complex<double>;

/// Endstate dispersion data at height h: the gamma denominator
/// a_h = (c - sqrt(h))^2 - h/F^2 (the determinant of the endstate flux
/// matrix in the comoving frame).
struct EndstateDispersion {
    double h = 0;
    double speed_c = 0, q0 = 0, froude = 0;
    double a_h = 0;

    static EndstateDispersion at(double h, const DerivedScalars& d) {
        EndstateDispersion e;
        e.h = h;
        e.speed_c = d.speed_c;
        e.q0 = d.q0;
        e.froude = d.froude;
        const double t = d.speed_c - std::sqrt(h);
        e.a_h = t * t - h / (d.froude * d.froude);
        return e;
    }
};

/// Quadratic under the square root in the spatial eigenvalues:
/// Q_h(lambda) = lambda^2 h/F^2 + lambda(-(c-sqrt h) + 2 sqrt(h)/F^2)
///               + (3/2 - c/sqrt h)^2.
inline complexd q_poly(double h, complexd lambda, const DerivedScalars& d) {
    const double F2 = d.froude * d.froude;
    const double sh = std::sqrt(h);
    const double t = 1.5 - d.speed_c / sh;
    return lambda * lambda * (h / F2) + lambda * (-(d.speed_c - sh) + 2.0 * sh / F2) + t * t;
}

/// Spatial eigenvalues of the endstate eigenvalue ODE,
/// gamma_{+-}(lambda) = (lambda(c-sqrt h) - (3/2 - c/sqrt h) +- sqrt(Q_h)) / a_h,
/// with the principal square root. branch = +1 or -1.
inline complexd gamma_pm(double h, complexd lambda, int branch, const DerivedScalars& d) {
    const auto e = EndstateDispersion::at(h, d);
    if (e.a_h == 0.0)
        throw std::invalid_argument("gamma_pm: characteristic endstate (h equals sonic height)");
    const double sh = std::sqrt(h);
    const double t = 1.5 - d.speed_c / sh;
    const complexd root = std::sqrt(q_poly(h, lambda, d));
    return (lambda * (d.speed_c - sh) - t + double(branch) * root) / e.a_h;
}

/// Closed-form extrema of y -> Re sqrt(-y^2 alpha + i y beta + gamma) over
/// the real line, for positive alpha, gamma: {min, max} of
/// {sqrt(gamma), |beta|/(2 sqrt(alpha))}.
inline std::pair<double, double> sqrt_extrema(double alpha, double beta, double gamma) {
    if (!(alpha > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("sqrt_extrema: alpha and gamma must be positive");
    const double a = std::sqrt(gamma);
    const double b = std::abs(beta) / (2.0 * std::sqrt(alpha));
    return {std::min(a, b), std::max(a, b)};
}

/// One weighted essential-spectrum boundary curve pair at endstate h and
/// weight eta: lambda(xi) = g(c-sqrt h) - 1/sqrt h +- sqrt(g^2 h/F^2 - g + 1/h)
/// with g = eta + i xi. The square-root branch is continued in xi to avoid
/// branch flips along the curves.
struct BoundaryCurve {
    double h = 0, eta = 0;
    std::vector<double> xi;
    std::vector<complexd> lambda_plus, lambda_minus;
};

inline BoundaryCurve boundary_curve(double h, double eta, const std::vector<double>& xi_grid,
                                    const DerivedScalars& d) {
    BoundaryCurve c;
    c.h = h;
    c.eta = eta;
    c.xi = xi_grid;
    c.lambda_plus.resize(xi_grid.size());
    c.lambda_minus.resize(xi_grid.size());
    const double F2 = d.froude * d.froude;
    const double sh = std::sqrt(h);
    complexd prev_root;
    bool have_prev = false;
    for (std::size_t i = 0; i < xi_grid.size(); ++i) {
        const complexd g(eta, xi_grid[i]);
        complexd root = std::sqrt(g * g * (h / F2) - g + 1.0 / h);
        if (have_prev && std::abs(-root - prev_root) < std::abs(root - prev_root)) root = -root;
        prev_root = root;
        have_prev = true;
        const complexd base = g * (d.speed_c - sh) - 1.0 / sh;
        c.lambda_plus[i] = base + root;
        c.lambda_minus[i] = base - root;
    }
    return c;
}

/// Symmetric xi grid on [-xi_max, xi_max] with n points.
inline std::vector<double> symmetric_grid(double xi_max, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = -xi_max + 2.0 * xi_max * i / (n - 1);
    return g;
}

/// Auto-select the half-width of the xi grid so the curve endpoints have
/// straightened out: |Re lambda(+-Xi)| must exceed 3x the mid-range spread.
inline double choose_xi_max(double h, double eta, const DerivedScalars& d, double xi0 = 16.0) {
    double xi_max = xi0;
    for (int iter = 0; iter < 24; ++iter) {
        auto c = boundary_curve(h, eta, symmetric_grid(xi_max, 257), d);
        double re_min = 1e300, re_max = -1e300;
        for (std::size_t i = c.xi.size() / 4; i < 3 * c.xi.size() / 4; ++i) {
            for (auto v : {c.lambda_plus[i], c.lambda_minus[i]}) {
                re_min = std::min(re_min, v.real());
                re_max = std::max(re_max, v.real());
            }
        }
        const double spread = std::max(re_max - re_min, 1e-8);
        const double end_re = std::min({std::abs(c.lambda_plus.front().real()),
                                        std::abs(c.lambda_plus.back().real()),
                                        std::abs(c.lambda_minus.front().real()),
                                        std::abs(c.lambda_minus.back().real())});
        if (end_re > 3.0 * spread) return xi_max;
        xi_max *= 2.0;
    }
    return xi_max;
}

/// Admissible left-weight window. For F >= 2 these are the high-frequency
/// limits of Re gamma_{+-} at H_L; for F < 2 the lower constraint moves to
/// lambda = 0, giving (0, eta_max) with the same closed-form upper endpoint.
struct WeightWindow {
    double eta_min = 0;
    double eta_max = 0;
    bool empty = false;
    double midpoint() const { return 0.5 * (eta_min + eta_max); }
};

inline WeightWindow weight_window(const DerivedScalars& d) {
    const double F = d.froude, hl = d.h_left;
    const double cs = d.speed_c / std::sqrt(hl);
    WeightWindow w;
    w.eta_max = (1.0 + F / 2.0) / (cs - 1.0 + 1.0 / F) / hl;
    w.eta_min = F >= 2.0 ? (F / 2.0 - 1.0) / (-cs + 1.0 + 1.0 / F) / hl : 0.0;
    w.empty = !(w.eta_min < w.eta_max);
    return w;
}

/// Best essential spectral gap theta_opt and the left weight eta_opt that
/// attains it. theta_opt > 0 exactly when F < sqrt(2 nu (nu+1)).
struct OptimalGap {
    double theta_opt = 0;
    double eta_opt = 0;
};

inline OptimalGap optimal_gap(const DerivedScalars& d) {
    const double F2 = d.froude * d.froude;
    const double shl = std::sqrt(d.h_left);
    OptimalGap g;
    g.theta_opt = F2 / (2.0 * d.h_left) * (-(d.speed_c - shl) + 2.0 * shl / F2);
    g.eta_opt = F2 / (2.0 * d.h_left);
    return g;
}

/// Absolute spectrum of the endstate h: the set where the two spatial
/// eigenvalues share their real part. For F >= 2 it is the pair of vertical
/// half-lines {Re = sigma, |Im| >= y} terminating at the branch points
/// (roots of Q_h). For F < 2 the branch points may be real, in which case
/// the vertical line is completed by a real segment; `branch_points_real`
/// flags that situation.
struct AbsoluteLines {
    double h = 0;
    double sigma = 0;           // real part of the absolute spectrum line
    double y = 0;               // |Im| >= y on the line (0 if branch points real)
    std::array<complexd, 2> branch_points{};
    bool branch_points_real = false;
    bool unstable = false;  // sigma >= 0 with h above the sonic height
};

inline AbsoluteLines absolute_lines(double h, const DerivedScalars& d) {
    const double F2 = d.froude * d.froude;
    const double sh = std::sqrt(h);
    AbsoluteLines out;
    out.h = h;
    out.sigma = F2 / (2.0 * h) * ((d.speed_c - sh) - 2.0 * sh / F2);
    const double q_at_sigma = q_poly(h, complexd(out.sigma, 0.0), d).real();
    if (q_at_sigma < -1e-12 * std::max(1.0, std::abs(out.sigma))) {
        if (d.froude >= 2.0)
            throw std::logic_error("absolute_lines: negative Q at the vertex with F >= 2");
        out.branch_points_real = true;
        out.y = 0.0;
        const double alpha = h / F2;
        const double half = std::sqrt(-q_at_sigma / alpha);
        out.branch_points = {complexd(out.sigma - half, 0.0), complexd(out.sigma + half, 0.0)};
    } else {
        out.y = std::sqrt(std::max(0.0, F2 * q_at_sigma / h));
        out.branch_points = {complexd(out.sigma, -out.y), complexd(out.sigma, out.y)};
    }
    out.unstable = out.sigma >= 0.0 && h > d.h_s;
    return out;
}

/// Numbers of spatial eigenvalues of the endstate problem at height h lying
/// to each side of the weight line Re = eta.
struct SplitCounts {
    int greater = 0;  // Re gamma > eta
    int less = 0;     // Re gamma < eta
    bool on_boundary = false;
};

inline SplitCounts splitting_counts(double h, complexd lambda, double eta,
                                    const DerivedScalars& d) {
    SplitCounts s;
    for (int branch : {+1, -1}) {
        const double re = gamma_pm(h, lambda, branch, d).real();
        if (std::abs(re - eta) <= 1e-12) {
            s.on_boundary = true;
        } else if (re > eta) {
            ++s.greater;
        } else {
            ++s.less;
        }
    }
    return s;
}

/// Weighted essential-spectrum membership by the counting rule: lambda is
/// off the essential spectrum iff no spatial eigenvalue sits on either
/// weight line and count(H_L, Re > eta_l) + count(H_R, Re < eta_r) equals 2
/// for smooth waves, 1 for discontinuous ones.
inline bool off_essential_spectrum(complexd lambda, double eta_l, double eta_r, bool smooth,
                                   const DerivedScalars& d) {
    const auto l = splitting_counts(d.h_left, lambda, eta_l, d);
    const auto r = splitting_counts(d.h_right, lambda, eta_r, d);
    if (l.on_boundary || r.on_boundary) return false;
    return l.greater + r.less == (smooth ? 2 : 1);
}

/// Full geometry bundle at chosen weights.
struct SpectrumGeometry {
    DerivedScalars derived;
    double eta_l = 0, eta_r = 0;
    WeightWindow window;
    OptimalGap gap;
    double eta_l_infinity = 0, eta_r_infinity = 0;  // profile tail decay rates
    AbsoluteLines abs_left, abs_right;
    BoundaryCurve curve_left, curve_right;
};

/// Assemble the geometry at weights (eta_l, eta_r). eta_r defaults to
/// -5 eta_opt (the right endstate can be pushed arbitrarily far left);
/// xi_max <= 0 requests the automatic grid half-width.
inline SpectrumGeometry spectrum_geometry(const WaveParams& p, double eta_l, double eta_r,
                                          double xi_max = 0.0, int n = 2001) {
    SpectrumGeometry g;
    g.derived = derive(p);
    g.window = weight_window(g.derived);
    g.gap = optimal_gap(g.derived);
    g.eta_l = std::isfinite(eta_l) ? eta_l : g.window.midpoint();
    g.eta_r = std::isfinite(eta_r) ? eta_r : -5.0 * g.gap.eta_opt;
    g.eta_l_infinity = eta_l_inf(g.derived);
    g.eta_r_infinity = eta_r_inf(g.derived);
    g.abs_left = absolute_lines(p.h_left, g.derived);
    g.abs_right = absolute_lines(p.h_right, g.derived);
    const double xl = xi_max > 0 ? xi_max : choose_xi_max(p.h_left, g.eta_l, g.derived);
    const double xr = xi_max > 0 ? xi_max : choose_xi_max(p.h_right, g.eta_r, g.derived);
    g.curve_left = boundary_curve(p.h_left, g.eta_l, symmetric_grid(xl, n), g.derived);
    g.curve_right = boundary_curve(p.h_right, g.eta_r, symmetric_grid(xr, n), g.derived);
    return g;
}

}  // namespace hydroshock
