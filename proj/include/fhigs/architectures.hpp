#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>

#include "fhigs/block.hpp"

namespace fhigs {

/// Series architecture: fractional hybrid filter of order alpha followed by
/// a complementary linear fractional low pass of order 1-alpha with cut-off
/// omega_r, so the combined gain slope stays first-order while the phase lag
/// moves between -90 deg (alpha=0) and the classic hybrid value (alpha=1).
struct ArchAConfig {
    HigsParams higs;       // higs.alpha is the fractional order
    double omega_r = 1.0;  // complement cut-off, rad/s
    double band_high_ratio = 1e4;
    int n_stages = 12;

    void validate() const {
        higs.validate();
        if (omega_r <= 0.0) throw std::invalid_argument("ArchAConfig: omega_r must be > 0");
        if (band_high_ratio <= 1.0)
            throw std::invalid_argument("ArchAConfig: band_high_ratio must be > 1");
    }
};

inline std::unique_ptr<Block> make_arch_a(const ArchAConfig& cfg) {
    cfg.validate();
    auto series = std::make_unique<SeriesBlock>();
    series->add(std::make_unique<HigsBlock>(cfg.higs));
    const double complement_order = 1.0 - cfg.higs.alpha;
    if (complement_order > 0.0) {
        series->add(std::make_unique<RationalFilterBlock>(RationalFracFilter::low_pass(
            complement_order, cfg.omega_r, cfg.omega_r * cfg.band_high_ratio, cfg.n_stages)));
    }
    return series;
}

/// Parallel architecture: beta * classic hybrid filter + (1-beta) * linear
/// first-order low pass, both fed the same input.
struct ArchBConfig {
    double beta = 0.5;
    HigsParams higs{1.0, 1.0, 1.0};  // classic filter (alpha = 1)
    double lpf_cut = 1.0;

    void validate() const {
        if (beta < 0.0 || beta > 1.0)
            throw std::invalid_argument("ArchBConfig: beta must be in [0, 1]");
        higs.validate();
        if (higs.alpha != 1.0)
            throw std::invalid_argument("ArchBConfig: the hybrid path uses alpha = 1");
        if (lpf_cut <= 0.0) throw std::invalid_argument("ArchBConfig: lpf_cut must be > 0");
    }
};

inline std::unique_ptr<Block> make_arch_b(const ArchBConfig& cfg) {
    cfg.validate();
    return std::make_unique<BlendBlock>(cfg.beta, std::make_unique<HigsBlock>(cfg.higs),
                                        std::make_unique<LeadLagBlock>(0.0, cfg.lpf_cut));
}

/// Loop-shaping parameters: lead corners straddling the crossover, PI corner
/// a decade below, cut-off of the generalized hybrid element inside the
/// integrator block.
struct PidParams {
    double k_p;
    double omega_d;
    double omega_t;
    double omega_i;
    double omega_c;
    double omega_r;

    static PidParams defaults(double omega_c) {
        if (omega_c <= 0.0) throw std::invalid_argument("PidParams: omega_c must be > 0");
        PidParams p{};
        p.omega_c = omega_c;
        p.k_p = omega_c * omega_c / 1.8;
        p.omega_d = omega_c / 1.8;
        p.omega_t = 1.8 * omega_c;
        p.omega_i = omega_c / 10.0;
        p.omega_r = omega_c / 3.0;
        return p;
    }

    void validate() const {
        if (!(omega_d < omega_c && omega_c < omega_t))
            throw std::invalid_argument("PidParams: need omega_d < omega_c < omega_t");
        if (omega_i <= 0.0 || omega_r <= 0.0)
            throw std::invalid_argument("PidParams: corner frequencies must be > 0");
    }
};

/// Controller pipeline: PD (properized with a roll-off pole at 100*omega_t)
/// -> [1 + omega_i * I] with I = (1 + omega_r/s) * H_f -> low pass at
/// omega_t -> gain k_p. The hybrid element H_f uses k_h = 1/omega_r and
/// omega_h = omega_r * k_h so that I reduces exactly to 1/s at alpha = 0.
/// H_f sits after the PI term so its resetting action sees the accumulated
/// integral, which keeps the step response free of the slow creep tail that
/// the opposite ordering produces at alpha near 1.
inline std::unique_ptr<Block> build_pid(const PidParams& p, double alpha) {
    p.validate();
    (void)FracOrder(alpha);

    const double k_h = 1.0 / p.omega_r;
    const double omega_h = p.omega_r * k_h;
    ArchAConfig hf;
    hf.higs = HigsParams(omega_h, k_h, alpha);
    hf.omega_r = p.omega_r;
    // complement ladder up to 100 * omega_c
    hf.band_high_ratio = (100.0 * p.omega_c) / p.omega_r;

    auto integrator = std::make_unique<SeriesBlock>();
    integrator->add(std::make_unique<ParallelUnityBlock>(p.omega_r,
                                                         std::make_unique<IntegratorBlock>()));
    integrator->add(make_arch_a(hf));

    auto pid = std::make_unique<SeriesBlock>();
    pid->add(std::make_unique<LeadLagBlock>(p.omega_d, 100.0 * p.omega_t));
    pid->add(std::make_unique<ParallelUnityBlock>(p.omega_i, std::move(integrator)));
    pid->add(std::make_unique<LeadLagBlock>(0.0, p.omega_t));
    pid->add(std::make_unique<GainBlock>(p.k_p));
    return pid;
}

inline std::unique_ptr<Block> build_pid(double omega_c, double alpha) {
    return build_pid(PidParams::defaults(omega_c), alpha);
}

/// Single mass: x_ddot = force / m, advanced exactly under zero-order-hold
/// force.
struct Plant {
    double mass = 1.0;
    Plant() = default;
    explicit Plant(double m) : mass(m) {
        if (m <= 0.0) throw std::invalid_argument("Plant: mass must be > 0");
    }
};

class DoubleIntegrator {
public:
    explicit DoubleIntegrator(Plant plant) : plant_(plant) {}

    double step(double force, double dt) {
        if (dt <= 0.0) throw std::invalid_argument("DoubleIntegrator: dt must be > 0");
        const double a = force / plant_.mass;
        x_ += v_ * dt + 0.5 * a * dt * dt;
        v_ += a * dt;
        return x_;
    }
    void reset() { x_ = v_ = 0.0; }
    double position() const { return x_; }
    double velocity() const { return v_; }

private:
    Plant plant_;
    double x_ = 0.0, v_ = 0.0;
};

}  // namespace fhigs
