#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

// Wave parameters of the inclined Saint-Venant model, the closed-form scalars
// attached to a heteroclinic connection between the equilibrium heights, and
// the classification of the connection by existence type and stability region.

namespace hydroshock {

struct WaveParams {
    double h_left;   // left equilibrium height H_L > 0
    double h_right;  // right equilibrium height H_R > 0, != H_L
    double froude;   // Froude number F > 0

    void validate() const {
        auto bad = [](double v) { return !std::isfinite(v) || v <= 0.0; };
        if (bad(h_left) || bad(h_right) || bad(froude))
            throw std::invalid_argument("WaveParams: h_left, h_right, froude must be finite and positive");
        if (h_left == h_right)
            throw std::invalid_argument("WaveParams: h_left == h_right admits no non-constant wave");
    }
};

/// Scalars determined by (H_L, H_R, F): the wave speed, the flux constant q0,
/// the sonic height h_s, the spurious third root h_out of the profile cubic,
/// the subshock upstream height h_star, and the characteristic determinant at
/// the endstates. Input parameters are carried along for convenience.
struct DerivedScalars {
    double h_left = 0, h_right = 0, froude = 0;
    double nu = 0;       // sqrt(H_L / H_R)
    double speed_c = 0;  // wave speed
    double q0 = 0;       // c*H - Q along the wave
    double h_s = 0;      // sonic height (q0*F)^(2/3)
    double h_out = 0;    // root of the profile cubic below q0/c
    double h_star = 0;   // height at 0^- for discontinuous profiles
    double a_left = 0;   // char_det at H_L
    double a_right = 0;  // char_det at H_R
};

/// Existence classes of Proposition-style case analysis plus the explicit
/// boundary/degenerate variants. Cases (ii)-(v) connect H_L > H_R; case (i)
/// is the increasing smooth connection with H_L < H_R.
enum class ProfileClass {
    IncreasingSmooth,          // (i)
    NonmonotoneDiscontinuous,  // (ii)
    RiemannShock,              // (iii)
    DecreasingDiscontinuous,   // (iv)
    SmoothDecreasing,          // (v)
    NoWave,                    // F = (nu+1)/nu^2 with nu > 1: no wave at all
    RollWaveBoundary,          // F = nu0(nu0+1): sonic height hits max height
    ReverseOnly,               // only the reversed-role connection exists
};

enum class StabilityRegion {
    Stab,           // marginally stable in the unweighted space
    Conv,           // convectively exponentially stable
    Abs,            // absolutely unstable
    Boundary,       // on a dividing curve between regions
    NotApplicable,  // no wave for this ordered pair
};

/// Critical Froude numbers at fixed height ratio, evaluated at nu =
/// sqrt(max/min based on the ratio). no_wave < riemann < convective < roll
/// for nu > 1.
struct ThresholdTable {
    double nu = 0;
    double no_wave = 0;     // (nu+1)/nu^2
    double riemann = 0;     // (nu+1)*sqrt(2(nu^2+1))/(2 nu)
    double convective = 0;  // sqrt(2 nu (nu+1))
    double roll = 0;        // nu (nu+1)
};

inline const char* to_string(ProfileClass c) {
    switch (c) {
        case ProfileClass::IncreasingSmooth: return "increasing_smooth";
        case ProfileClass::NonmonotoneDiscontinuous: return "nonmonotone_discontinuous";
        case ProfileClass::RiemannShock: return "riemann_shock";
        case ProfileClass::DecreasingDiscontinuous: return "decreasing_discontinuous";
        case ProfileClass::SmoothDecreasing: return "smooth_decreasing";
        case ProfileClass::NoWave: return "no_wave";
        case ProfileClass::RollWaveBoundary: return "roll_wave_boundary";
        case ProfileClass::ReverseOnly: return "reverse_only";
    }
    return "?";
}

inline const char* to_string(StabilityRegion r) {
    switch (r) {
        case StabilityRegion::Stab: return "stab";
        case StabilityRegion::Conv: return "conv";
        case StabilityRegion::Abs: return "abs";
        case StabilityRegion::Boundary: return "boundary";
        case StabilityRegion::NotApplicable: return "not_applicable";
    }
    return "?";
}

/// Characteristic determinant along the wave, a(h) = h/F^2 - (q0/h)^2.
/// Its sign equals sign(h - h_s); it vanishes exactly at the sonic height.
inline double char_det(double h, double q0, double froude) {
    const double m = q0 / h;
    return h / (froude * froude) - m * m;
}

inline ThresholdTable threshold_table_nu(double nu) {
    ThresholdTable t;
    t.nu = nu;
    t.no_wave = (nu + 1.0) / (nu * nu);
    t.riemann = (nu + 1.0) * std::sqrt(2.0 * (nu * nu + 1.0)) / (2.0 * nu);
    t.convective = std::sqrt(2.0 * nu * (nu + 1.0));
    t.roll = nu * (nu + 1.0);
    return t;
}

/// Critical Froude numbers for h_ratio = H_R/H_L. For h_ratio < 1 these are
/// evaluated at nu = sqrt(1/h_ratio); for h_ratio > 1 at nu0 = sqrt(h_ratio),
/// where the roll entry nu0(nu0+1) is the reverse-shock existence threshold.
inline ThresholdTable threshold_table(double h_ratio) {
    if (!std::isfinite(h_ratio) || h_ratio <= 0.0 || h_ratio == 1.0)
        throw std::invalid_argument("threshold_table: h_ratio must be positive, finite and != 1");
    const double nu = h_ratio < 1.0 ? std::sqrt(1.0 / h_ratio) : std::sqrt(h_ratio);
    return threshold_table_nu(nu);
}

inline DerivedScalars derive(const WaveParams& p) {
    p.validate();
    DerivedScalars d;
    d.h_left = p.h_left;
    d.h_right = p.h_right;
    d.froude = p.froude;

    // nu-parametrized forms are well conditioned for nu near 1.
    const double hr = p.h_right, F = p.froude;
    const double nu = std::sqrt(p.h_left / p.h_right);
    const double sr = std::sqrt(hr);
    d.nu = nu;
    d.speed_c = (nu * nu + nu + 1.0) / (nu + 1.0) * sr;
    d.q0 = nu * nu / (nu + 1.0) * hr * sr;
    d.h_s = std::cbrt(F * nu * nu / (nu + 1.0) * F * nu * nu / (nu + 1.0)) * hr;
    d.h_out = nu * nu / ((nu + 1.0) * (nu + 1.0)) * hr;
    d.h_star = (std::sqrt(8.0 * F * F * nu * nu * nu * nu + (nu + 1.0) * (nu + 1.0)) - (nu + 1.0)) /
               (2.0 * (nu + 1.0)) * hr;
    d.a_left = char_det(p.h_left, d.q0, F);
    d.a_right = char_det(p.h_right, d.q0, F);
    return d;
}

namespace detail {

// Absolute tolerance for detecting boundary equalities in the (nu, F) plane.
inline constexpr double kBoundaryTol = 1e-12;
// The Riemann case is measure-zero; recognize it with a relative tolerance.
inline constexpr double kRiemannRelTol = 1e-9;

}  // namespace detail

/// Case analysis in the (nu, F) plane. Boundary equalities are reported as
/// the dedicated variants rather than folded into an open region.
inline ProfileClass classify_existence(const WaveParams& p) {
    p.validate();
    const double F = p.froude;
    const double nu = std::sqrt(p.h_left / p.h_right);
    if (nu > 1.0) {
        const ThresholdTable t = threshold_table_nu(nu);
        if (std::abs(F - t.no_wave) <= detail::kBoundaryTol) return ProfileClass::NoWave;
        if (F < t.no_wave) return ProfileClass::SmoothDecreasing;
        if (std::abs(F - t.riemann) <= detail::kRiemannRelTol * F) return ProfileClass::RiemannShock;
        if (F < t.riemann) return ProfileClass::DecreasingDiscontinuous;
        if (std::abs(F - t.roll) <= detail::kBoundaryTol) return ProfileClass::RollWaveBoundary;
        if (F < t.roll) return ProfileClass::NonmonotoneDiscontinuous;
        return ProfileClass::ReverseOnly;
    }
    // nu < 1: the case-(i) threshold (nu+1)/nu^2 equals nu0(nu0+1) at nu0 = 1/nu.
    const double thr = (nu + 1.0) / (nu * nu);
    if (std::abs(F - thr) <= detail::kBoundaryTol) return ProfileClass::RollWaveBoundary;
    if (F > thr) return ProfileClass::IncreasingSmooth;
    return ProfileClass::ReverseOnly;
}

inline StabilityRegion classify_stability(const WaveParams& p) {
    const ProfileClass cls = classify_existence(p);
    switch (cls) {
        case ProfileClass::NoWave:
        case ProfileClass::ReverseOnly:
            return StabilityRegion::NotApplicable;
        case ProfileClass::RollWaveBoundary:
            return StabilityRegion::Boundary;
        case ProfileClass::IncreasingSmooth:
            return StabilityRegion::Abs;  // both endstates hydrodynamically unstable
        default:
            break;
    }
    const double F = p.froude;
    const double nu = std::sqrt(p.h_left / p.h_right);
    const double conv_thr = std::sqrt(2.0 * nu * (nu + 1.0));
    if (std::abs(F - conv_thr) <= detail::kBoundaryTol) return StabilityRegion::Boundary;
    if (F > conv_thr) return StabilityRegion::Abs;
    if (F >= 2.0) return StabilityRegion::Conv;  // F = 2 belongs to the convective region
    return StabilityRegion::Stab;
}

/// Absolute spreading speed of the H_L endstate: the frame speed at which its
/// absolute spectrum becomes marginal. Predicts the invasion-front speed in
/// the absolutely unstable regimes.
inline double spreading_speed(const WaveParams& p) {
    p.validate();
    return std::sqrt(p.h_left) * (1.0 + 2.0 / (p.froude * p.froude));
}

/// spreading_speed minus the wave speed: the onset drift in the comoving frame.
inline double spreading_speed_excess(const WaveParams& p) {
    return spreading_speed(p) - derive(p).speed_c;
}

namespace detail {

// Classification recovered from the height orderings (H_R vs h_s vs H_L vs
// h_star) instead of the (nu, F) inequalities; used as an internal cross-check.
inline ProfileClass classify_by_ordering(const DerivedScalars& d) {
    const double hl = d.h_left, hr = d.h_right;
    const double tol = 64.0 * kBoundaryTol * std::max(hl, hr);
    if (hl > hr) {
        if (std::abs(d.h_s - hl) <= tol) return ProfileClass::RollWaveBoundary;
        if (d.h_s > hl) return ProfileClass::ReverseOnly;
        if (std::abs(d.h_s - hr) <= tol) return ProfileClass::NoWave;
        if (d.h_s < hr) return ProfileClass::SmoothDecreasing;
        // H_R < h_s < H_L: discontinuous; position of h_star decides the shape.
        if (std::abs(d.h_star - hl) <= kRiemannRelTol * 8.0 * hl) return ProfileClass::RiemannShock;
        return d.h_star > hl ? ProfileClass::NonmonotoneDiscontinuous
                             : ProfileClass::DecreasingDiscontinuous;
    }
    if (std::abs(d.h_s - hr) <= tol) return ProfileClass::RollWaveBoundary;
    if (d.h_s > hr) return ProfileClass::IncreasingSmooth;
    return ProfileClass::ReverseOnly;
}

}  // namespace detail

}  // namespace hydroshock
