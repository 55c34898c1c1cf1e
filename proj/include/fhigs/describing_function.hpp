#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "fhigs/higs.hpp"
#include "fhigs/quadrature.hpp"

namespace fhigs {

/// Describing-function query: sinusoidal input e = e_hat * sin(omega t).
struct DfQuery {
    double omega = 1.0;
    double e_hat = 1.0;
    HigsParams params;

    DfQuery(double omega_, double e_hat_, HigsParams params_)
        : omega(omega_), e_hat(e_hat_), params(params_) {
        if (omega <= 0.0) throw std::invalid_argument("DfQuery: omega must be > 0");
        if (e_hat <= 0.0) throw std::invalid_argument("DfQuery: e_hat must be > 0");
        params.validate();
    }
};

enum class DfSource { ClosedForm, Empirical };

struct FrequencyResponsePoint {
    double omega = 0.0;
    std::complex<double> value;
    double gamma = 0.0;
    DfSource source = DfSource::ClosedForm;
};

/// Intermediates of the switching-angle closed form gamma = arccos(X).
struct GammaIntermediates {
    double A, B, C, a, b, X;

    static GammaIntermediates from(const DfQuery& q) {
        GammaIntermediates g{};
        const double phi = M_PI * q.params.alpha / 2.0;
        g.A = std::sin(phi);
        g.B = q.params.omega_h * std::pow(q.omega, -q.params.alpha);
        g.C = q.params.k_h;
        g.a = (g.B * std::sqrt(1.0 - g.A * g.A) - g.C) * (g.B * std::sqrt(1.0 - g.A * g.A) - g.C);
        g.b = g.B * g.B * g.A * g.A;
        g.X = (g.b + g.a) == 0.0 ? 1.0 : (g.b - g.a) / (g.b + g.a);
        return g;
    }
};

/// Classic switching angle: 2 arctan(k_h w / omega_h). omega_h = 0 is the
/// pure-integrator limit (gamma = pi).
inline double gamma_classic(double omega, double omega_h, double k_h) {
    if (omega <= 0.0) throw std::invalid_argument("gamma_classic: omega must be > 0");
    if (omega_h == 0.0) return M_PI;
    return 2.0 * std::atan(k_h * omega / omega_h);
}

namespace detail {

/// Residual of the switching continuity equation
/// B (sin(g - phi) + sin(phi)) - C sin(g).
inline double gamma_residual(double g, double B, double C, double phi) {
    return B * (std::sin(g - phi) + std::sin(phi)) - C * std::sin(g);
}

}  // namespace detail

/// Switching angle of the fractional filter. Solves the continuity equation
/// at the integral/gain mode boundary; the arccos closed form is validated
/// against it, with a bisection fallback. When the gain-mode inequality holds
/// from the start of the half period (B cos(phi) >= C) no interior root
/// exists and the angle is 0; the degenerate alpha=0 / omega_h=0 branch
/// gives pi when the integral branch never reaches the gain curve.
inline double gamma_fractional(const DfQuery& q) {
    const double phi = M_PI * q.params.alpha / 2.0;
    const double A = std::sin(phi);
    const double cphi = std::cos(phi);
    const double B = q.params.omega_h * std::pow(q.omega, -q.params.alpha);
    const double C = q.params.k_h;

    if (C == 0.0) return 0.0;  // output pinned to zero, no switching
    if (B * A <= 1e-14 * (B + C)) return C >= B * cphi ? M_PI : 0.0;
    if (C <= B * cphi) return 0.0;

    const auto gi = GammaIntermediates::from(q);
    const double x = std::clamp(gi.X, -1.0, 1.0);
    if (gi.X < -1.0 - 1e-9 || gi.X > 1.0 + 1e-9)
        throw std::runtime_error("gamma_fractional: X outside [-1, 1]: X=" + std::to_string(gi.X));
    double gamma = std::acos(x);

    const double scale = B + C;
    if (std::abs(detail::gamma_residual(gamma, B, C, phi)) <= 1e-6 * scale) return gamma;

    // bisection on (0, pi); the residual is positive near 0 and negative at
    // the first interior crossing
    double lo = 1e-12, hi = M_PI - 1e-12;
    double flo = detail::gamma_residual(lo, B, C, phi);
    double fhi = detail::gamma_residual(hi, B, C, phi);
    if (flo * fhi > 0.0)
        throw std::runtime_error(
            "gamma_fractional: no root of the continuity equation in (0, pi); residual at pi/2 = " +
            std::to_string(detail::gamma_residual(M_PI / 2.0, B, C, phi)));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = detail::gamma_residual(mid, B, C, phi);
        if (flo * fm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    gamma = 0.5 * (lo + hi);
    if (std::abs(detail::gamma_residual(gamma, B, C, phi)) > 1e-6 * scale)
        throw std::runtime_error("gamma_fractional: continuity equation not satisfied, residual=" +
                                 std::to_string(detail::gamma_residual(gamma, B, C, phi)));
    return gamma;
}

/// Classic first-harmonic gain. Complex-exponential form with the imaginary
/// unit restored on the gain-mode bracket (see the matching trigonometric
/// expansion in df_fractional, which this must equal at alpha=1).
inline std::complex<double> df_classic(double omega, double omega_h, double k_h) {
    if (omega <= 0.0) throw std::invalid_argument("df_classic: omega must be > 0");
    using cd = std::complex<double>;
    const cd j(0.0, 1.0);
    const double g = gamma_classic(omega, omega_h, k_h);
    const cd e2 = std::exp(-2.0 * j * g) - 1.0;
    const cd e1 = std::exp(-j * g) - 1.0;
    const cd integ = (omega_h / (j * omega)) *
                     (g / M_PI + j * e2 / (2.0 * M_PI) - 4.0 * j * e1 / (2.0 * M_PI));
    const cd gain = k_h * ((M_PI - g) / M_PI + j * e2 / (2.0 * M_PI));
    return integ + gain;
}

/// First-harmonic describing function of the fractional filter from the
/// closed-form Fourier coefficients of the piecewise steady-state output.
inline FrequencyResponsePoint df_fractional(const DfQuery& q) {
    const double gamma = gamma_fractional(q);
    const double phi = M_PI * q.params.alpha / 2.0;
    const double A = std::sin(phi);
    const double cphi = std::cos(phi);
    const double B = q.params.omega_h * std::pow(q.omega, -q.params.alpha);
    const double C = q.params.k_h;
    const double e = q.e_hat;

    const double a1 =
        B / (2.0 * M_PI) * e *
            (cphi - std::cos(2.0 * gamma - phi) - 2.0 * gamma * A + 4.0 * A * std::sin(gamma)) +
        C / (2.0 * M_PI) * e * (std::cos(2.0 * gamma) - 1.0);
    const double b1 =
        B / (2.0 * M_PI) * e *
            (2.0 * gamma * cphi - std::sin(2.0 * gamma - phi) + 3.0 * A -
             4.0 * A * std::cos(gamma)) +
        C / (2.0 * M_PI) * e * (2.0 * (M_PI - gamma) + std::sin(2.0 * gamma));

    FrequencyResponsePoint p;
    p.omega = q.omega;
    p.gamma = gamma;
    p.value = std::complex<double>(b1, a1) / e;
    p.source = DfSource::ClosedForm;
    return p;
}

/// Steady-state piecewise output at phase theta = omega*t in [0, 2*pi).
inline double piecewise_output(double theta, const DfQuery& q, double gamma) {
    const double phi = M_PI * q.params.alpha / 2.0;
    const double A = std::sin(phi);
    const double B = q.params.omega_h * std::pow(q.omega, -q.params.alpha);
    const double C = q.params.k_h;
    theta = std::fmod(theta, 2.0 * M_PI);
    if (theta < 0.0) theta += 2.0 * M_PI;
    if (theta < gamma) return B * q.e_hat * (std::sin(theta - phi) + A);
    if (theta < M_PI) return C * q.e_hat * std::sin(theta);
    if (theta < M_PI + gamma) return B * q.e_hat * (std::sin(theta - phi) - A);
    return C * q.e_hat * std::sin(theta);
}

/// n-th harmonic coefficient (b_n + j a_n)/e_hat by per-segment quadrature of
/// the piecewise output; n=1 reproduces df_fractional.
inline std::complex<double> df_harmonic_n(const DfQuery& q, int n) {
    if (n < 1) throw std::invalid_argument("df_harmonic_n: n must be >= 1");
    const double gamma = gamma_fractional(q);

    auto coeff = [&](std::size_t panels) {
        const double bounds[5] = {0.0, gamma, M_PI, M_PI + gamma, 2.0 * M_PI};
        double an = 0.0, bn = 0.0;
        for (int s = 0; s < 4; ++s) {
            if (bounds[s + 1] <= bounds[s]) continue;
            an += integrate_gl(
                [&](double th) { return piecewise_output(th, q, gamma) * std::cos(n * th); },
                bounds[s], bounds[s + 1], panels);
            bn += integrate_gl(
                [&](double th) { return piecewise_output(th, q, gamma) * std::sin(n * th); },
                bounds[s], bounds[s + 1], panels);
        }
        return std::complex<double>(bn, an) / (M_PI * q.e_hat);
    };

    const std::size_t panels = static_cast<std::size_t>(std::max(2, n));
    const std::complex<double> c1 = coeff(panels);
    const std::complex<double> c2 = coeff(2 * panels);
    const double fund_scale = q.params.k_h + q.params.omega_h * std::pow(q.omega, -q.params.alpha);
    if (std::abs(c1 - c2) > 1e-8 * (fund_scale + std::abs(c2)))
        throw std::runtime_error("df_harmonic_n: quadrature did not converge");
    return c2;
}

}  // namespace fhigs
