#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhigs/architectures.hpp"
#include "fhigs/block.hpp"
#include "fhigs/describing_function.hpp"
#include "fhigs/time_series.hpp"

namespace fhigs {

struct SimConfig {
    double dt = 1e-5;
    double duration = 1.0;
    int settle_periods = 10;
    int analysis_periods = 4;
};

struct StepMetrics {
    double overshoot_pct = 0.0;
    double settling_time = 0.0;  // 2% band
    double rise_time = 0.0;      // 10% -> 90%
    double steady_state_error = 0.0;
    bool settled = true;
};

struct HarmonicSpectrum {
    double base_freq = 0.0;  // rad/s
    std::map<int, std::complex<double>> harmonics;

    double relative_magnitude(int n) const {
        const double fund = std::abs(harmonics.at(1));
        return fund == 0.0 ? 0.0 : std::abs(harmonics.at(n)) / fund;
    }
};

/// Deterministic open-loop run of a filter pipeline over a prepared input.
inline TimeSeries simulate_open_loop(Block& pipeline, const TimeSeries& input,
                                     const SimConfig& config) {
    if (std::abs(input.dt - config.dt) > 1e-12 * config.dt)
        throw std::invalid_argument("simulate_open_loop: input dt differs from config dt");
    pipeline.reset();
    return pipeline.process(input);
}

namespace detail {

struct SteadyRun {
    TimeSeries output;
    double dt = 0.0;
    std::size_t n_per_period = 0;
    std::size_t analysis_start = 0;  // sample index
    std::size_t analysis_samples = 0;
};

/// Drive the pipeline with e_hat*sin(omega t), using a sample period that
/// divides the input period exactly, and locate the analysis window.
inline SteadyRun run_sinusoid(Block& pipeline, double omega, double e_hat,
                              const SimConfig& config) {
    if (omega <= 0.0) throw std::invalid_argument("run_sinusoid: omega must be > 0");
    const double period = 2.0 * M_PI / omega;
    std::size_t n_per = static_cast<std::size_t>(std::llround(period / config.dt));
    n_per = std::max<std::size_t>(n_per, 32);
    const double dt = period / static_cast<double>(n_per);

    const int settle = std::max(config.settle_periods, 1);
    const int analysis = std::max(config.analysis_periods, 2);
    const std::size_t total = static_cast<std::size_t>(settle + analysis) * n_per;

    SteadyRun r;
    r.dt = dt;
    r.n_per_period = n_per;
    r.analysis_start = static_cast<std::size_t>(settle) * n_per;
    r.analysis_samples = static_cast<std::size_t>(analysis) * n_per;

    const TimeSeries input = make_sine(e_hat, omega, dt, total);
    pipeline.reset();
    r.output = pipeline.process(input);
    return r;
}

inline double period_rms(const TimeSeries& y, std::size_t start, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += y.values[start + i] * y.values[start + i];
    return std::sqrt(acc / static_cast<double>(n));
}

inline void check_steady(const SteadyRun& r) {
    const std::size_t last = r.analysis_start + r.analysis_samples - r.n_per_period;
    const double rms_last = period_rms(r.output, last, r.n_per_period);
    const double rms_prev = period_rms(r.output, last - r.n_per_period, r.n_per_period);
    if (rms_last == 0.0 && rms_prev == 0.0) return;
    if (std::abs(rms_last - rms_prev) > 0.01 * std::max(rms_last, rms_prev))
        throw std::runtime_error("no steady state: period-to-period RMS drift " +
                                 std::to_string(std::abs(rms_last - rms_prev) /
                                                std::max(rms_last, rms_prev)));
}

/// First-harmonic projection onto sin/cos over the (integer-period) window.
inline std::complex<double> project_harmonic(const SteadyRun& r, double omega, int n) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < r.analysis_samples; ++i) {
        const std::size_t idx = r.analysis_start + i;
        const double t = r.output.t0 + static_cast<double>(idx) * r.dt;
        a += r.output.values[idx] * std::cos(n * omega * t);
        b += r.output.values[idx] * std::sin(n * omega * t);
    }
    const double scale = 2.0 / static_cast<double>(r.analysis_samples);
    return {b * scale, a * scale};
}

}  // namespace detail

/// Empirical describing function: steady sinusoidal response projected onto
/// the first harmonic, (b1 + j a1) / e_hat.
inline FrequencyResponsePoint estimate_df(Block& pipeline, double omega, double e_hat,
                                          const SimConfig& config) {
    if (e_hat <= 0.0) throw std::invalid_argument("estimate_df: e_hat must be > 0");
    const detail::SteadyRun r = detail::run_sinusoid(pipeline, omega, e_hat, config);
    detail::check_steady(r);
    FrequencyResponsePoint p;
    p.omega = omega;
    p.value = detail::project_harmonic(r, omega, 1) / e_hat;
    p.gamma = 0.0;
    p.source = DfSource::Empirical;
    return p;
}

/// Harmonics 1..N of the settled output under pure sine input. Even
/// harmonics are included; for any half-wave-symmetric filter they come out
/// near zero, which doubles as a self-check.
inline HarmonicSpectrum harmonic_spectrum(Block& pipeline, double omega, double e_hat,
                                          const SimConfig& config, int n_harmonics) {
    if (n_harmonics < 1) throw std::invalid_argument("harmonic_spectrum: N must be >= 1");
    const detail::SteadyRun r = detail::run_sinusoid(pipeline, omega, e_hat, config);
    detail::check_steady(r);
    HarmonicSpectrum s;
    s.base_freq = omega;
    for (int n = 1; n <= n_harmonics; ++n) s.harmonics[n] = detail::project_harmonic(r, omega, n);
    return s;
}

struct ClosedLoopResult {
    TimeSeries position;
    TimeSeries control_effort;
};

/// Unit negative-feedback loop e = r - y, u = controller(e), y = plant(u),
/// with a one-sample computational delay at the loop closure (the controller
/// sees the previous plant output).
inline ClosedLoopResult simulate_closed_loop(Block& controller, const Plant& plant,
                                             const TimeSeries& reference,
                                             const SimConfig& config) {
    if (std::abs(reference.dt - config.dt) > 1e-12 * config.dt)
        throw std::invalid_argument("simulate_closed_loop: reference dt differs from config dt");
    controller.reset();
    DoubleIntegrator integ(plant);

    double ref_max = 0.0;
    for (double v : reference.values) ref_max = std::max(ref_max, std::abs(v));
    const double guard = 1e6 * std::max(ref_max, 1e-12);

    std::vector<double> y(reference.size()), u(reference.size());
    double y_prev = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double e = reference.values[i] - y_prev;
        u[i] = controller.step(e, config.dt);
        y[i] = integ.step(u[i], config.dt);
        if (std::abs(y[i]) > guard)
            throw std::runtime_error("simulate_closed_loop: divergence at sample " +
                                     std::to_string(i));
        y_prev = y[i];
    }
    return ClosedLoopResult{TimeSeries(reference.t0, reference.dt, std::move(y)),
                            TimeSeries(reference.t0, reference.dt, std::move(u))};
}

/// Standard step-response metrics: overshoot over the final value, last exit
/// of the 2% band, 10-90% rise time.
inline StepMetrics step_metrics(const TimeSeries& response, double final_value) {
    if (final_value == 0.0)
        throw std::invalid_argument("step_metrics: final_value must be nonzero");
    if (response.size() < 2) throw std::invalid_argument("step_metrics: response too short");

    StepMetrics m;
    const double sgn = final_value > 0.0 ? 1.0 : -1.0;
    double peak = response.values[0] * sgn;
    for (double v : response.values) peak = std::max(peak, v * sgn);
    m.overshoot_pct = std::max(0.0, (peak - final_value * sgn) / (final_value * sgn) * 100.0);

    const double band = 0.02 * std::abs(final_value);
    std::size_t last_outside = 0;
    bool ever_outside = false;
    for (std::size_t i = 0; i < response.size(); ++i) {
        if (std::abs(response.values[i] - final_value) > band) {
            last_outside = i;
            ever_outside = true;
        }
    }
    if (!ever_outside) {
        m.settling_time = 0.0;
    } else if (last_outside + 1 >= response.size()) {
        m.settled = false;
        m.settling_time = response.duration();
    } else {
        m.settling_time = response.time_at(last_outside + 1) - response.t0;
    }

    auto crossing = [&](double level) -> double {
        const double target = level * final_value;
        for (std::size_t i = 1; i < response.size(); ++i) {
            const double prev = response.values[i - 1] * sgn;
            const double cur = response.values[i] * sgn;
            if (prev < target * sgn && cur >= target * sgn) {
                const double frac = (target * sgn - prev) / (cur - prev);
                return response.time_at(i - 1) + frac * response.dt - response.t0;
            }
        }
        return -1.0;
    };
    const double t10 = crossing(0.10);
    const double t90 = crossing(0.90);
    m.rise_time = (t10 >= 0.0 && t90 >= 0.0) ? t90 - t10 : -1.0;
    m.steady_state_error = std::abs(response.values.back() - final_value);
    return m;
}

}  // namespace fhigs
