#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fhigs/fractional.hpp"

namespace fhigs {

/// Band-limited rational approximation of s^(-order), order in [0, 1],
/// realized as a ladder of first-order sections with log-spaced pole/zero
/// frequencies. order=0 is a unity pass-through and order=1 an exact
/// integrator. A DC-normalized variant (low_pass) acts as a fractional-order
/// low-pass filter with cut-off at the lower band edge.
class RationalFracFilter {
public:
    struct Section {
        double zero = 0.0;  // rad/s, ignored when has_zero is false
        double pole = 0.0;  // rad/s
        bool has_zero = true;

        std::complex<double> response(double w) const {
            const std::complex<double> jw(0.0, w);
            const std::complex<double> den = 1.0 + jw / pole;
            if (!has_zero) return 1.0 / den;
            return (1.0 + jw / zero) / den;
        }
    };

    double order() const { return order_; }
    double band_low() const { return w_low_; }
    double band_high() const { return w_high_; }
    int n_stages() const { return static_cast<int>(sections_.size()); }
    double gain() const { return gain_; }
    const std::vector<Section>& sections() const { return sections_; }

    /// In-band approximation of (jw)^(-order); gain matched at the geometric
    /// band center.
    static RationalFracFilter design(double order, double w_low, double w_high, int n_stages) {
        check_band(w_low, w_high);
        if (n_stages < 1) throw std::invalid_argument("RationalFracFilter: n_stages >= 1");
        RationalFracFilter f;
        f.order_ = FracOrder(order).value();
        f.w_low_ = w_low;
        f.w_high_ = w_high;
        if (f.order_ == 0.0) {
            f.gain_ = 1.0;
            return f;
        }
        if (f.order_ == 1.0) {
            f.exact_integrator_ = true;
            f.gain_ = 1.0;
            return f;
        }
        f.sections_ = oustaloup_sections(f.order_, w_low, w_high, n_stages);
        const double wm = std::sqrt(w_low * w_high);
        f.gain_ = std::pow(wm, -f.order_) / std::abs(f.ladder_response(wm));
        return f;
    }

    /// Fractional low-pass of the given order with cut-off w_cut: unity at DC,
    /// -20*order dB/dec roll-off between w_cut and w_high.
    static RationalFracFilter low_pass(double order, double w_cut, double w_high, int n_stages) {
        check_band(w_cut, w_high);
        if (n_stages < 1) throw std::invalid_argument("RationalFracFilter: n_stages >= 1");
        RationalFracFilter f;
        f.order_ = FracOrder(order).value();
        f.w_low_ = w_cut;
        f.w_high_ = w_high;
        f.gain_ = 1.0;
        if (f.order_ == 0.0) return f;
        if (f.order_ == 1.0) {
            f.sections_.push_back(Section{0.0, w_cut, false});
            return f;
        }
        f.sections_ = oustaloup_sections(f.order_, w_cut, w_high, n_stages);
        return f;
    }

    std::complex<double> response(double w) const {
        if (exact_integrator_) return gain_ / std::complex<double>(0.0, w);
        return gain_ * ladder_response(w);
    }

    /// Worst relative magnitude deviation from a pure w^(-order) slope over
    /// the band interior (half a decade inside each edge), anchored at the
    /// geometric band center.
    double approx_error() const {
        if (order_ == 0.0 || exact_integrator_) return 0.0;
        const double lo = w_low_ * std::sqrt(10.0);
        const double hi = w_high_ / std::sqrt(10.0);
        if (lo >= hi) return 0.0;
        const double wm = std::sqrt(w_low_ * w_high_);
        const double anchor = std::abs(response(wm)) * std::pow(wm, order_);
        double worst = 0.0;
        const int kPoints = 200;
        for (int i = 0; i < kPoints; ++i) {
            const double w = lo * std::pow(hi / lo, static_cast<double>(i) / (kPoints - 1));
            const double err =
                std::abs(std::abs(response(w)) * std::pow(w, order_) / anchor - 1.0);
            worst = std::max(worst, err);
        }
        return worst;
    }

    // --- time stepping (Tustin per section, trapezoid for the exact integrator) ---

    void reset() {
        state_.assign(sections_.size(), SectionState{});
        integ_state_ = 0.0;
        integ_prev_in_ = 0.0;
        primed_ = false;
    }

    double step(double x, double dt) {
        if (dt <= 0.0) throw std::invalid_argument("RationalFracFilter: dt must be > 0");
        if (!primed_ || dt != dt_) prime(dt);
        double v = x;
        if (exact_integrator_) {
            integ_state_ += 0.5 * dt * (v + integ_prev_in_);
            integ_prev_in_ = v;
            v = integ_state_;
        }
        for (std::size_t i = 0; i < sections_.size(); ++i) {
            auto& st = state_[i];
            const auto& c = coeffs_[i];
            const double y = (c.b0 * v + c.b1 * st.x1 - c.a1 * st.y1) / c.a0;
            st.x1 = v;
            st.y1 = y;
            v = y;
        }
        return gain_ * v;
    }

private:
    struct SectionState {
        double x1 = 0.0, y1 = 0.0;
    };
    struct TustinCoeffs {
        double b0 = 1.0, b1 = 1.0, a0 = 1.0, a1 = 0.0;
    };

    static void check_band(double w_low, double w_high) {
        if (!(w_low > 0.0) || !(w_high > w_low))
            throw std::invalid_argument("RationalFracFilter: band must satisfy 0 < w_low < w_high");
    }

    /// Pole/zero ladder of s^(-order) over [wl, wh]:
    /// pole_k = wl * r^((2k-1-order)/(2N)), zero_k = wl * r^((2k-1+order)/(2N)).
    static std::vector<Section> oustaloup_sections(double order, double wl, double wh, int n) {
        std::vector<Section> s;
        const double ratio = wh / wl;
        for (int k = 1; k <= n; ++k) {
            Section sec;
            sec.pole = wl * std::pow(ratio, (2.0 * k - 1.0 - order) / (2.0 * n));
            sec.zero = wl * std::pow(ratio, (2.0 * k - 1.0 + order) / (2.0 * n));
            sec.has_zero = true;
            s.push_back(sec);
        }
        return s;
    }

    std::complex<double> ladder_response(double w) const {
        std::complex<double> h(1.0, 0.0);
        for (const auto& s : sections_) h *= s.response(w);
        return h;
    }

    void prime(double dt) {
        dt_ = dt;
        coeffs_.clear();
        for (const auto& s : sections_) {
            TustinCoeffs c;
            const double cp = 2.0 / (s.pole * dt);
            c.a0 = 1.0 + cp;
            c.a1 = 1.0 - cp;
            if (s.has_zero) {
                const double cz = 2.0 / (s.zero * dt);
                c.b0 = 1.0 + cz;
                c.b1 = 1.0 - cz;
            } else {
                c.b0 = 1.0;
                c.b1 = 1.0;
            }
            coeffs_.push_back(c);
        }
        if (state_.size() != sections_.size()) state_.assign(sections_.size(), SectionState{});
        primed_ = true;
    }

    double order_ = 0.0;
    double w_low_ = 1.0;
    double w_high_ = 10.0;
    double gain_ = 1.0;
    bool exact_integrator_ = false;
    std::vector<Section> sections_;

    // stepping state
    std::vector<SectionState> state_;
    std::vector<TustinCoeffs> coeffs_;
    double integ_state_ = 0.0;
    double integ_prev_in_ = 0.0;
    double dt_ = 0.0;
    bool primed_ = false;
};

}  // namespace fhigs
