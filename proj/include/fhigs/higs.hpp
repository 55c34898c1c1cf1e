#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fhigs/fractional.hpp"
#include "fhigs/history_buffer.hpp"
#include "fhigs/time_series.hpp"

namespace fhigs {

/// Filter configuration: integral frequency, gain value, integrator order.
struct HigsParams {
    double omega_h = 1.0;
    double k_h = 1.0;
    double alpha = 1.0;

    HigsParams() = default;
    HigsParams(double omega_h_, double k_h_, double alpha_)
        : omega_h(omega_h_), k_h(k_h_), alpha(alpha_) {
        validate();
    }
    void validate() const {
        if (omega_h < 0.0) throw std::invalid_argument("HigsParams: omega_h must be >= 0");
        if (k_h < 0.0) throw std::invalid_argument("HigsParams: k_h must be >= 0");
        (void)FracOrder(alpha);
    }
};

enum class HigsMode { Integrator, Gain };

struct SwitchEvent {
    enum class Trigger { SectorBoundary, GainInequality, Monotonicity };
    double time = 0.0;
    HigsMode from = HigsMode::Gain;
    HigsMode to = HigsMode::Gain;
    Trigger trigger = Trigger::SectorBoundary;
};

struct HigsConfig {
    std::size_t history_capacity = HistoryBuffer::kDefaultCapacity;
    /// When true, the D^(1-alpha) switching test sees only the input history
    /// accumulated since the last mode switch (streaming path only).
    bool history_since_switch = false;
};

/// Hybrid integrator-gain filter with a fractional-order integral mode.
/// In the integral region the state follows D^alpha x_h = omega_h * e,
/// advanced by increments of the global fractional integral of the input; in
/// the gain region x_h = k_h * e.
/// alpha=1 reproduces the classic integer-order filter exactly.
class FractionalHigs {
public:
    explicit FractionalHigs(HigsParams params, HigsConfig config = {})
        : params_(params), config_(config) {
        params_.validate();
    }

    const HigsParams& params() const { return params_; }
    HigsMode mode() const { return mode_; }
    const std::vector<SwitchEvent>& events() const { return events_; }

    void reset() {
        mode_ = HigsMode::Gain;
        u_prev_ = 0.0;
        e_prev_ = 0.0;
        d_int_prev_ = 0.0;
        run_sum_ = 0.0;
        t_ = 0.0;
        n_ = 0;
        history_.reset();
        events_.clear();
    }

    /// Advance one sample. The input derivative is formed by backward
    /// difference internally; use step_with_derivative to supply it.
    double step(double e, double dt) {
        const double e_dot = n_ == 0 ? 0.0 : (e - e_prev_) / dt;
        return step_with_derivative(e, e_dot, dt);
    }

    double step_with_derivative(double e, double e_dot, double dt) {
        if (dt <= 0.0) throw std::invalid_argument("FractionalHigs: dt must be > 0");
        (void)e_dot;  // the sampled automaton works on integral increments
        const double a = params_.alpha;
        double d_int;
        if (a == 1.0) {
            run_sum_ += e * dt;
            d_int = run_sum_;
        } else if (a == 0.0) {
            d_int = e;
        } else {
            if (!history_ || history_->dt() != dt)
                history_.emplace(dt, config_.history_capacity);
            history_->push(e);
            d_int = frac_int(*history_, a);
        }
        return advance(e, d_int, dt);
    }

    /// Whole-trajectory evaluation. The two fractional transforms of the
    /// input are linear, so they are precomputed in one pass (FFT
    /// convolution with the full weight sequence) and the switching automaton
    /// then runs sample by sample.
    TimeSeries process(const TimeSeries& input) {
        const double a = params_.alpha;
        if (config_.history_since_switch && a != 0.0 && a != 1.0) {
            std::vector<double> out(input.size());
            for (std::size_t i = 0; i < input.size(); ++i) out[i] = step(input.values[i], input.dt);
            return TimeSeries(input.t0, input.dt, std::move(out));
        }
        const std::vector<double> d_int = gl_apply_series(input.values, input.dt, -a);
        std::vector<double> out(input.size());
        for (std::size_t i = 0; i < input.size(); ++i)
            out[i] = advance(input.values[i], d_int[i], input.dt);
        return TimeSeries(input.t0, input.dt, std::move(out));
    }

private:
    /// Sampled automaton: the integral branch always advances from the
    /// previous output, u_cand = u_prev + omega_h * increment of D^(-alpha)e,
    /// then projects onto the sector. Reaching or passing the k_h*e curve is
    /// the discrete form of the gain-region inequality
    /// omega_h D^(1-alpha)(e) e >= k_h de/dt e (ties ride the curve), so the
    /// mode pattern matches the region definitions while the output stays
    /// continuous by construction.
    double advance(double e, double d_int, double dt) {
        const double wh = params_.omega_h;
        const double kh = params_.k_h;
        double u;

        if (kh == 0.0) {
            // sector [0, 0]: output pinned to zero
            u = 0.0;
            mode_ = HigsMode::Gain;
        } else {
            // alpha=0 pins the integral branch to omega_h*e outright (D^0 has
            // no memory); otherwise the branch advances from the previous
            // output by the increment of the fractional integral
            const double incr = wh * (d_int - d_int_prev_);
            const double u_cand = params_.alpha == 0.0 ? wh * e : u_prev_ + incr;
            const double u_gain = kh * e;
            const double sgn = e > 0.0 ? 1.0 : -1.0;
            const HigsMode prev_mode = mode_;

            bool clamped = false;
            if (e == 0.0) {
                // sector degenerates to {0}
                u = 0.0;
                mode_ = HigsMode::Gain;
            } else if ((u_cand - u_gain) * sgn >= 0.0 ||
                       (prev_mode == HigsMode::Gain && incr * sgn < 0.0)) {
                // integral branch caught the gain curve: ride it. The second
                // disjunct is the non-accumulative guard: on the curve with
                // omega_h D^(1-alpha)(e) e < 0 the integral mode may not
                // start, so the gain mode persists
                u = u_gain;
                mode_ = HigsMode::Gain;
            } else if (u_cand * sgn < 0.0) {
                // integral branch must not leave the sector through zero
                u = 0.0;
                mode_ = HigsMode::Integrator;
                clamped = true;
            } else {
                u = u_cand;
                mode_ = HigsMode::Integrator;
            }
            if (mode_ != prev_mode)
                record(mode_ == HigsMode::Gain ? SwitchEvent::Trigger::SectorBoundary
                                               : SwitchEvent::Trigger::GainInequality,
                       prev_mode, mode_);
            else if (clamped)
                record(SwitchEvent::Trigger::Monotonicity, prev_mode, mode_);
        }

        u_prev_ = u;
        e_prev_ = e;
        d_int_prev_ = d_int;
        t_ += dt;
        ++n_;
        if (config_.history_since_switch && history_ && switched_this_sample_) history_->clear();
        switched_this_sample_ = false;
        return u;
    }

    void record(SwitchEvent::Trigger trig, HigsMode from, HigsMode to) {
        events_.push_back(SwitchEvent{t_, from, to, trig});
        if (from != to) switched_this_sample_ = true;
    }

    HigsParams params_;
    HigsConfig config_;
    HigsMode mode_ = HigsMode::Gain;
    double u_prev_ = 0.0;
    double e_prev_ = 0.0;
    double d_int_prev_ = 0.0;
    double run_sum_ = 0.0;  // alpha=1 running integral
    double t_ = 0.0;
    std::size_t n_ = 0;
    bool switched_this_sample_ = false;
    std::optional<HistoryBuffer> history_;
    std::vector<SwitchEvent> events_;
};

struct HigsResponse {
    TimeSeries output;
    std::vector<SwitchEvent> events;
};

/// Full trajectory of the fractional filter on a uniformly sampled input.
inline HigsResponse higs_response(const HigsParams& params, const TimeSeries& input,
                                  const HigsConfig& config = {}) {
    FractionalHigs filter(params, config);
    TimeSeries out = filter.process(input);
    return HigsResponse{std::move(out), filter.events()};
}

/// Classic integer-order filter (alpha = 1).
inline TimeSeries classic_higs_response(double omega_h, double k_h, const TimeSeries& input) {
    return higs_response(HigsParams(omega_h, k_h, 1.0), input).output;
}

}  // namespace fhigs
