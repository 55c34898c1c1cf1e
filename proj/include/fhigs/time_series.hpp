#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fhigs {

/// Uniformly sampled real-valued signal.
struct TimeSeries {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    TimeSeries() = default;
    TimeSeries(double t0_, double dt_, std::vector<double> v)
        : t0(t0_), dt(dt_), values(std::move(v)) {
        if (dt <= 0.0) throw std::invalid_argument("TimeSeries: dt must be > 0");
    }

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double duration() const { return static_cast<double>(values.size()) * dt; }
};

inline TimeSeries make_sine(double amplitude, double omega, double dt, std::size_t n,
                            double t0 = 0.0) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = amplitude * std::sin(omega * (t0 + static_cast<double>(i) * dt));
    return TimeSeries(t0, dt, std::move(v));
}

/// e(t) = sum_k a_k * sin(w_k t)
inline TimeSeries make_multisine(const std::vector<std::pair<double, double>>& amp_omega,
                                 double dt, std::size_t n, double t0 = 0.0) {
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        for (const auto& [a, w] : amp_omega) v[i] += a * std::sin(w * t);
    }
    return TimeSeries(t0, dt, std::move(v));
}

inline TimeSeries make_step(double level, double dt, std::size_t n) {
    return TimeSeries(0.0, dt, std::vector<double>(n, level));
}

/// Backward-difference derivative, first sample zero.
inline std::vector<double> backward_diff(const std::vector<double>& v, double dt) {
    std::vector<double> d(v.size(), 0.0);
    for (std::size_t i = 1; i < v.size(); ++i) d[i] = (v[i] - v[i - 1]) / dt;
    return d;
}

}  // namespace fhigs
