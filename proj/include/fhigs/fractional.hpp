#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "fhigs/history_buffer.hpp"

namespace fhigs {

/// Derivative/integral order, restricted to [0, 1].
class FracOrder {
public:
    FracOrder(double alpha) : alpha_(alpha) {  // NOLINT: implicit by design
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("FracOrder: alpha must be in [0, 1]");
    }
    double value() const { return alpha_; }

private:
    double alpha_;
};

/// Grunwald-Letnikov weights for order q (q > 0 differentiates, q < 0 integrates):
/// w_0 = 1, w_j = w_{j-1} * (1 - (q + 1) / j).
inline std::vector<double> gl_weights(double q, std::size_t n) {
    std::vector<double> w(n);
    if (n == 0) return w;
    w[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j)
        w[j] = w[j - 1] * (1.0 - (q + 1.0) / static_cast<double>(j));
    return w;
}

namespace detail {

/// Truncated GL sum over the newest min(size, capacity) samples.
inline double gl_apply_newest(const HistoryBuffer& h, double q) {
    if (h.empty()) throw std::runtime_error("insufficient history");
    const std::size_t n = h.size();
    double acc = 0.0;
    double w = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) w *= 1.0 - (q + 1.0) / static_cast<double>(j);
        acc += w * h.back(j);
    }
    return acc * std::pow(h.dt(), -q);
}

}  // namespace detail

/// D^alpha at the newest sample. alpha=0 is the identity, alpha=1 the
/// backward difference.
inline double frac_diff(const HistoryBuffer& history, FracOrder order) {
    return detail::gl_apply_newest(history, order.value());
}

/// Fractional integral of order alpha at the newest sample (alpha=1 is the
/// running rectangular integral, alpha=0 the identity).
inline double frac_int(const HistoryBuffer& history, FracOrder order) {
    return detail::gl_apply_newest(history, -order.value());
}

/// D^q applied to sin(w t): amplitude scales by w^q, phase advances by q*pi/2.
/// q may be negative (fractional integral).
inline std::pair<double, double> sinusoid_frac_rule(double amplitude, double omega, double q) {
    if (omega <= 0.0) throw std::invalid_argument("sinusoid_frac_rule: omega must be > 0");
    return {amplitude * std::pow(omega, q), q * M_PI / 2.0};
}

/// GL operator of order q applied to a whole trajectory at once via FFT
/// convolution with the full (untruncated) weight sequence.
inline std::vector<double> gl_apply_series(const std::vector<double>& x, double dt, double q) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    if (dt <= 0.0) throw std::invalid_argument("gl_apply_series: dt must be > 0");

    const std::vector<double> w = gl_weights(q, n);

    std::size_t m = 1;
    while (m < 2 * n) m <<= 1;

    std::vector<double> a(m, 0.0), b(m, 0.0);
    std::copy(x.begin(), x.end(), a.begin());
    std::copy(w.begin(), w.end(), b.begin());

    const std::size_t nc = m / 2 + 1;
    std::vector<std::complex<double>> fa(nc), fb(nc);
    auto* fa_raw = reinterpret_cast<fftw_complex*>(fa.data());
    auto* fb_raw = reinterpret_cast<fftw_complex*>(fb.data());

    // the FFTW planner is not thread-safe (only fftw_execute is), so plan
    // creation and destruction are serialized across threads
    static std::mutex planner_mutex;
    fftw_plan pa, pb;
    {
        const std::lock_guard<std::mutex> lock(planner_mutex);
        pa = fftw_plan_dft_r2c_1d(static_cast<int>(m), a.data(), fa_raw, FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c_1d(static_cast<int>(m), b.data(), fb_raw, FFTW_ESTIMATE);
    }
    fftw_execute(pa);
    fftw_execute(pb);

    for (std::size_t i = 0; i < nc; ++i) fa[i] *= fb[i];

    std::vector<double> out(m, 0.0);
    fftw_plan pc;
    {
        const std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        pc = fftw_plan_dft_c2r_1d(static_cast<int>(m), fa_raw, out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(pc);
    {
        const std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(pc);
    }

    const double scale = std::pow(dt, -q) / static_cast<double>(m);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = out[i] * scale;
    return y;
}

}  // namespace fhigs
