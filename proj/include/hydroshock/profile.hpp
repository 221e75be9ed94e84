#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hydroshock/ode.hpp"
#include "hydroshock/wave_family.hpp"

// Construction of the traveling-wave profile H(x) in the comoving frame:
// the scalar profile ODE, its closed-form implicit antiderivative (used as
// an oracle), the Rankine-Hugoniot residual, and the sampled profile object.

namespace hydroshock {

/// Right-hand side of the profile ODE,
///   H' = F^2 (H-H_L)(H-H_R)(H-H_out) / ((H-H_s)(H^2 + H H_s + H_s^2)).
inline double profile_rhs(double h, const DerivedScalars& d) {
    if (h <= 0.0) throw std::invalid_argument("profile_rhs: h must be positive");
    if (h == d.h_s) throw std::invalid_argument("profile_rhs: h equals the sonic height (pole)");
    const double F2 = d.froude * d.froude;
    const double num = F2 * (h - d.h_left) * (h - d.h_right) * (h - d.h_out);
    const double den = (h - d.h_s) * (h * h + h * d.h_s + d.h_s * d.h_s);
    return num / den;
}

/// d(profile_rhs)/dH, analytic.
inline double profile_rhs_dh(double h, const DerivedScalars& d) {
    const double F2 = d.froude * d.froude;
    const double p1 = h - d.h_left, p2 = h - d.h_right, p3 = h - d.h_out;
    const double P = p1 * p2 * p3;
    const double Pp = p1 * p2 + p1 * p3 + p2 * p3;
    const double S = h * h * h - d.h_s * d.h_s * d.h_s;
    const double Sp = 3.0 * h * h;
    return F2 * (Pp * S - P * Sp) / (S * S);
}

/// d^2(profile_rhs)/dH^2, analytic.
inline double profile_rhs_dhh(double h, const DerivedScalars& d) {
    const double F2 = d.froude * d.froude;
    const double p1 = h - d.h_left, p2 = h - d.h_right, p3 = h - d.h_out;
    const double P = p1 * p2 * p3;
    const double Pp = p1 * p2 + p1 * p3 + p2 * p3;
    const double Ppp = 2.0 * (p1 + p2 + p3);
    const double S = h * h * h - d.h_s * d.h_s * d.h_s;
    const double Sp = 3.0 * h * h, Spp = 6.0 * h;
    return F2 * ((Ppp * S - P * Spp) * S - 2.0 * Sp * (Pp * S - P * Sp)) / (S * S * S);
}

/// Linearized decay rate of H - H_L as x -> -infinity (= rhs'(H_L)).
inline double eta_l_inf(const DerivedScalars& d) { return profile_rhs_dh(d.h_left, d); }

/// Linearized decay rate of H - H_R as x -> +infinity (= rhs'(H_R)), for
/// smooth profiles.
inline double eta_r_inf(const DerivedScalars& d) { return profile_rhs_dh(d.h_right, d); }

/// Residual of the reduced Rankine-Hugoniot relation between two heights:
/// [q0^2/H + H^2/(2F^2)] evaluated at h_plus minus at h_minus.
inline double rh_residual(double h_minus, double h_plus, const DerivedScalars& d) {
    if (h_minus <= 0.0 || h_plus <= 0.0)
        throw std::invalid_argument("rh_residual: heights must be positive");
    const double F2 = d.froude * d.froude;
    auto g = [&](double h) { return d.q0 * d.q0 / h + h * h / (2.0 * F2); };
    return g(h_plus) - g(h_minus);
}

/// Exact x-distance x(h_b) - x(h_a) along a smooth piece, by partial-fraction
/// integration of the reciprocal profile ODE. Both heights must lie strictly
/// inside one invariant interval free of {H_L, H_R, H_out, H_s}.
inline double implicit_oracle(double h_a, double h_b, const DerivedScalars& d) {
    const double lo = std::min(h_a, h_b), hi = std::max(h_a, h_b);
    for (double r : {d.h_left, d.h_right, d.h_out, d.h_s})
        if (lo <= r && r <= hi)
            throw std::invalid_argument("implicit_oracle: interval contains a root or the pole");
    const double F2 = d.froude * d.froude;
    const double r1 = d.h_left, r2 = d.h_right, r3 = d.h_out;
    const double hs3 = d.h_s * d.h_s * d.h_s;
    // (h^3 - h_s^3)/((h-r1)(h-r2)(h-r3)) = 1 + sum_i A_i/(h - r_i)
    const double A1 = (r1 * r1 * r1 - hs3) / ((r1 - r2) * (r1 - r3));
    const double A2 = (r2 * r2 * r2 - hs3) / ((r2 - r1) * (r2 - r3));
    const double A3 = (r3 * r3 * r3 - hs3) / ((r3 - r1) * (r3 - r2));
    auto anti = [&](double h) {
        return h + A1 * std::log(std::abs(h - r1)) + A2 * std::log(std::abs(h - r2)) +
               A3 * std::log(std::abs(h - r3));
    };
    return (anti(h_b) - anti(h_a)) / F2;
}

struct Subshock {
    double location = 0.0;
    double h_minus = 0.0;  // H(0^-)
    double h_plus = 0.0;   // H_R
};

/// Sampled piecewise-smooth traveling wave. The uniform grid carries the
/// left-trace value at x = 0 for discontinuous types; the subshock record
/// holds both traces. h_at()/q_at() evaluate the underlying dense solution.
///
/// Internally each smooth piece is integrated in the deviation variable
/// v = H - H_endstate, which keeps relative accuracy down to the 1e-13 tail
/// truncation.
class HydraulicProfile {
  public:
    WaveParams params{};
    DerivedScalars derived{};
    ProfileClass type{};
    std::vector<double> x;  // strictly increasing, uniform
    std::vector<double> h;
    std::optional<Subshock> subshock;

    bool discontinuous() const { return subshock.has_value(); }

    /// Height at arbitrary comoving coordinate (left trace at exactly 0 for
    /// discontinuous types).
    double h_at(double xq) const {
        if (discontinuous() && xq > 0.0) return params.h_right;
        if (!discontinuous() && xq > 0.0) {
            if (right_dev_.x.empty() || xq >= right_dev_.x_end()) return params.h_right;
            return params.h_right + right_dev_.eval(xq);
        }
        if (left_dev_.x.empty()) return params.h_left;  // Riemann left piece
        if (xq <= left_dev_.x_end()) return params.h_left;
        return params.h_left + left_dev_.eval(xq);
    }

    double q_at(double xq) const { return derived.speed_c * h_at(xq) - derived.q0; }

    /// Extent of the resolved (non-constant) left piece: [x_flat, 0].
    double left_resolved_extent() const { return left_dev_.x.empty() ? 0.0 : left_dev_.x_end(); }

    // deviation solves; public so diagnostics can inspect the dense nodes
    ode::Solution<double> left_dev_;   // v = H - H_L on x <= 0
    ode::Solution<double> right_dev_;  // v = H - H_R on x >= 0 (smooth types)
};

/// Integrate the profile ODE and sample it on a uniform grid spanning
/// [-half_length, half_length] with n_samples points.
inline HydraulicProfile build_profile(const WaveParams& p, double half_length, int n_samples) {
    if (!(half_length > 0.0) || n_samples < 2)
        throw std::invalid_argument("build_profile: need half_length > 0 and n_samples >= 2");
    HydraulicProfile prof;
    prof.params = p;
    prof.derived = derive(p);
    prof.type = classify_existence(p);
    const DerivedScalars& d = prof.derived;

    switch (prof.type) {
        case ProfileClass::NoWave:
        case ProfileClass::RollWaveBoundary:
        case ProfileClass::ReverseOnly:
            throw std::invalid_argument(std::string("build_profile: no profile for class ") +
                                        to_string(prof.type));
        default:
            break;
    }

    ode::Options opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-16;  // deviation variable: keep resolving the tail
    opt.h_max = 0.1;   // keeps the cubic dense-output error below 1e-7

    const double tail_tol = 1e-13;
    auto stop = [&](double, double v) { return std::abs(v) < tail_tol; };

    if (prof.type == ProfileClass::RiemannShock) {
        prof.subshock = Subshock{0.0, p.h_left, p.h_right};
    } else if (prof.type == ProfileClass::NonmonotoneDiscontinuous ||
               prof.type == ProfileClass::DecreasingDiscontinuous) {
        // Start at H(0^-) = H_*, displaced by 1e-13 toward the interior so the
        // Riemann limit H_* -> H_L stays well posed.
        const double eps = 1e-13 * d.h_star;
        const double h0 = prof.type == ProfileClass::NonmonotoneDiscontinuous ? d.h_star - eps
                                                                              : d.h_star + eps;
        auto rhs = [&d, &p](double, double v) { return profile_rhs(p.h_left + v, d); };
        prof.left_dev_ = ode::integrate(rhs, 0.0, -half_length, h0 - p.h_left, opt, stop);
        prof.subshock = Subshock{0.0, d.h_star, p.h_right};
    } else {
        // Smooth profile; fix the phase by H(0) = (H_L + H_R)/2.
        auto rhs_l = [&d, &p](double, double v) { return profile_rhs(p.h_left + v, d); };
        auto rhs_r = [&d, &p](double, double v) { return profile_rhs(p.h_right + v, d); };
        const double mid = 0.5 * (p.h_left + p.h_right);
        prof.left_dev_ = ode::integrate(rhs_l, 0.0, -half_length, mid - p.h_left, opt, stop);
        prof.right_dev_ = ode::integrate(rhs_r, 0.0, half_length, mid - p.h_right, opt, stop);
    }

    prof.x.resize(n_samples);
    prof.h.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double xi = -half_length + 2.0 * half_length * i / (n_samples - 1);
        prof.x[i] = xi;
        prof.h[i] = prof.h_at(xi);
    }
    return prof;
}

/// Least-squares slope of log|H(x) - H_L| over the resolved left tail;
/// compares against eta_l_inf. Uses the dense nodes with deviation between
/// band_lo and band_hi.
inline double fitted_left_tail_slope(const HydraulicProfile& prof, double band_lo = 1e-11,
                                     double band_hi = 1e-4) {
    const auto& sol = prof.left_dev_;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        const double dev = std::abs(sol.y[i]);
        if (dev > band_lo && dev < band_hi) {
            xs.push_back(sol.x[i]);
            ys.push_back(std::log(dev));
        }
    }
    if (xs.size() < 4) throw std::runtime_error("fitted_left_tail_slope: tail not resolved");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hydroshock
