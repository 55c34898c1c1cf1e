#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fhigs/architectures.hpp"
#include "fhigs/time_series.hpp"

namespace fhigs {

/// Real polynomial in s, ascending coefficient order.
using Poly = std::vector<double>;

inline Poly poly_mul(const Poly& p, const Poly& q) {
    Poly r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

inline Poly poly_add(const Poly& p, const Poly& q) {
    Poly r(std::max(p.size(), q.size()), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) r[i] += p[i];
    for (std::size_t i = 0; i < q.size(); ++i) r[i] += q[i];
    return r;
}

struct TransferFunction {
    Poly num{1.0};
    Poly den{1.0};

    TransferFunction series(const TransferFunction& other) const {
        return {poly_mul(num, other.num), poly_mul(den, other.den)};
    }
    TransferFunction parallel(const TransferFunction& other) const {
        return {poly_add(poly_mul(num, other.den), poly_mul(other.num, den)),
                poly_mul(den, other.den)};
    }
    /// Unity negative feedback around this open loop.
    TransferFunction close_unity_feedback() const { return {num, poly_add(den, num)}; }

    std::complex<double> response(double w) const {
        const std::complex<double> s(0.0, w);
        std::complex<double> n(0.0), d(0.0), sp(1.0);
        for (std::size_t i = 0; i < std::max(num.size(), den.size()); ++i) {
            if (i < num.size()) n += num[i] * sp;
            if (i < den.size()) d += den[i] * sp;
            sp *= s;
        }
        return n / d;
    }
};

/// Controllable-canonical state-space realization simulated with fixed-step
/// RK4. Serves as the independent linear oracle for the alpha=0 loop.
class LinearStateSpace {
public:
    explicit LinearStateSpace(const TransferFunction& tf) {
        Poly num = tf.num, den = tf.den;
        while (den.size() > 1 && den.back() == 0.0) den.pop_back();
        const std::size_t n = den.size() - 1;
        if (n == 0) throw std::invalid_argument("LinearStateSpace: static system");
        if (num.size() > den.size())
            throw std::invalid_argument("LinearStateSpace: improper transfer function");
        num.resize(den.size(), 0.0);
        const double dn = den.back();
        d_ = num.back() / dn;
        a_.assign(n, 0.0);
        c_.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            a_[i] = den[i] / dn;
            c_[i] = num[i] / dn - d_ * a_[i];
        }
        x_.assign(n, 0.0);
    }

    void reset() { std::fill(x_.begin(), x_.end(), 0.0); }

    double output(double u) const {
        double y = d_ * u;
        for (std::size_t i = 0; i < x_.size(); ++i) y += c_[i] * x_[i];
        return y;
    }

    /// One RK4 step with constant input u over [t, t+dt].
    void step(double u, double dt) {
        const std::size_t n = x_.size();
        std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
        deriv(x_, u, k1);
        axpy(tmp, x_, k1, 0.5 * dt);
        deriv(tmp, u, k2);
        axpy(tmp, x_, k2, 0.5 * dt);
        deriv(tmp, u, k3);
        axpy(tmp, x_, k3, dt);
        deriv(tmp, u, k4);
        for (std::size_t i = 0; i < n; ++i)
            x_[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

private:
    void deriv(const std::vector<double>& x, double u, std::vector<double>& dx) const {
        const std::size_t n = x.size();
        for (std::size_t i = 0; i + 1 < n; ++i) dx[i] = x[i + 1];
        double top = u;
        for (std::size_t i = 0; i < n; ++i) top -= a_[i] * x[i];
        dx[n - 1] = top;
    }
    static void axpy(std::vector<double>& out, const std::vector<double>& x,
                     const std::vector<double>& k, double h) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + h * k[i];
    }

    std::vector<double> a_, c_, x_;
    double d_ = 0.0;
};

/// Linear transfer function of the controller at alpha = 0, where the
/// generalized integrator reduces exactly to 1/s:
/// K_p (1+s/w_d)/(1+s/(100 w_t)) (1 + w_i/s) / (1+s/w_t).
inline TransferFunction linear_pid_tf(const PidParams& p) {
    p.validate();
    const TransferFunction lead{{1.0, 1.0 / p.omega_d}, {1.0, 1.0 / (100.0 * p.omega_t)}};
    const TransferFunction pi{{p.omega_i, 1.0}, {0.0, 1.0}};  // (w_i + s)/s
    const TransferFunction lpf{{1.0}, {1.0, 1.0 / p.omega_t}};
    const TransferFunction gain{{p.k_p}, {1.0}};
    return lead.series(pi).series(lpf).series(gain);
}

inline TransferFunction double_integrator_tf(double mass) {
    return {{1.0}, {0.0, 0.0, mass}};
}

/// Unit-step response of the closed linear loop, RK4 at a refined step.
inline TimeSeries linear_closed_loop_step(const PidParams& p, double mass, double dt,
                                          std::size_t n_samples, int refine = 10) {
    const TransferFunction open = linear_pid_tf(p).series(double_integrator_tf(mass));
    const TransferFunction closed = open.close_unity_feedback();
    LinearStateSpace ss(closed);
    const double h = dt / refine;
    std::vector<double> y(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (int k = 0; k < refine; ++k) ss.step(1.0, h);
        y[i] = ss.output(1.0);
    }
    return TimeSeries(0.0, dt, std::move(y));
}

}  // namespace fhigs
