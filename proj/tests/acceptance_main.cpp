// Acceptance gate: one line [PASS]/[FAIL] per criterion, nonzero exit on any
// failure. Each check is self-contained and catches its own exceptions so a
// blow-up in one criterion still lets the rest report.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "fhigs/architectures.hpp"
#include "fhigs/describing_function.hpp"
#include "fhigs/fractional.hpp"
#include "fhigs/higs.hpp"
#include "fhigs/linear_ss.hpp"
#include "fhigs/sim.hpp"

using namespace fhigs;
namespace {
constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int n, const char* what, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", n, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

void guarded(int n, const char* what, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
        const auto [ok, detail] = fn();
        report(n, what, ok, detail);
    } catch (const std::exception& e) {
        report(n, what, false, std::string("exception: ") + e.what());
    }
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

// first-harmonic projection used by criterion 8
std::complex<double> first_harmonic(const std::vector<double>& y, double dt, double omega,
                                    std::size_t start) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = start; i < y.size(); ++i) {
        const double th = omega * static_cast<double>(i) * dt;
        s += y[i] * std::sin(th);
        c += y[i] * std::cos(th);
    }
    const double norm = 2.0 / double(y.size() - start);
    return {s * norm, c * norm};
}

}  // namespace

int main() {
    // 1 -- fractional closed form collapses to the classic one at alpha = 1
    guarded(1, "alpha = 1 closed form matches the classic describing function", [] {
        double worst = 0.0;
        for (double w : log_grid(0.01, 100.0, 50)) {
            const DfQuery q(w, 1.0, HigsParams(1.0, 1.0, 1.0));
            worst = std::max(worst, std::abs(df_fractional(q).value - df_classic(w, 1.0, 1.0)));
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "max |diff| = %.3g", worst);
        return std::make_pair(worst < 1e-9, std::string(buf));
    });

    // 2 -- closed form against simulation-based estimates
    guarded(2, "closed form agrees with empirical estimates (2 % mag, 1 deg phase)", [] {
        double worst_mag = 0.0, worst_ph = 0.0;
        for (double a : {0.25, 0.5, 0.75, 1.0})
            for (double w : log_grid(0.05, 50.0, 20)) {
                const DfQuery q(w, 1.0, HigsParams(1.0, 1.0, a));
                const auto cf = df_fractional(q).value;
                HigsBlock block(q.params);
                SimConfig sc;
                sc.dt = 2.0 * kPi / w / 4000.0;
                sc.settle_periods = 20;
                const auto emp = estimate_df(block, w, 1.0, sc).value;
                worst_mag = std::max(worst_mag,
                                     std::abs(std::abs(emp) / std::abs(cf) - 1.0));
                double dph = (std::arg(emp) - std::arg(cf)) * 180.0 / kPi;
                worst_ph = std::max(worst_ph, std::abs(dph));
            }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "worst mag err %.3g, worst phase err %.3g deg",
                      worst_mag, worst_ph);
        return std::make_pair(worst_mag < 0.02 && worst_ph < 1.0, std::string(buf));
    });

    // 3 -- phase at the frequency extremes
    guarded(3, "phase endpoints of element and architecture a", [] {
        bool ok = true;
        std::string detail;
        const double ph1 =
            std::arg(df_fractional({100.0, 1.0, HigsParams(1.0, 1.0, 1.0)}).value) * 180.0 / kPi;
        ok &= ph1 >= -38.6 && ph1 <= -37.7;
        const double ph0 =
            std::arg(df_fractional({100.0, 1.0, HigsParams(1.0, 1.0, 0.0)}).value) * 180.0 / kPi;
        ok &= ph0 >= -0.5 && ph0 <= 0.0;

        SimConfig sc;
        sc.dt = 2.0 * kPi / 100.0 / 4000.0;
        sc.settle_periods = 30;
        ArchAConfig ca;
        ca.omega_r = 1.0;
        ca.higs = HigsParams(1.0, 1.0, 0.0);
        auto a0 = make_arch_a(ca);
        const double pha0 = std::arg(estimate_df(*a0, 100.0, 1.0, sc).value) * 180.0 / kPi;
        ok &= std::abs(pha0 - (-90.0)) <= 2.0;
        ca.higs = HigsParams(1.0, 1.0, 1.0);
        auto a1 = make_arch_a(ca);
        const double pha1 = std::arg(estimate_df(*a1, 100.0, 1.0, sc).value) * 180.0 / kPi;
        ok &= std::abs(pha1 - (-38.0)) <= 1.0;
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "element: %.2f deg (a=1), %.3f deg (a=0); arch a: %.2f, %.2f deg", ph1,
                      ph0, pha0, pha1);
        return std::make_pair(ok, std::string(buf));
    });

    // 4 -- harmonic content: fractional order beats linear blending
    guarded(4, "architecture a (alpha = 0.68) has lower odd harmonics than b (beta = 0.5)", [] {
        SimConfig sc;
        const double omega = 10.0;
        sc.dt = 2.0 * kPi / omega / 4000.0;
        sc.settle_periods = 30;
        ArchAConfig ca;
        ca.higs = HigsParams(1.0, 1.0, 0.68);
        ca.omega_r = 1.0;
        auto arch_a = make_arch_a(ca);
        const auto sa = harmonic_spectrum(*arch_a, omega, 1.0, sc, 7);
        ArchBConfig cb;
        cb.beta = 0.5;
        cb.higs = HigsParams(1.0, 1.0, 1.0);
        cb.lpf_cut = 1.0;
        auto arch_b = make_arch_b(cb);
        const auto sb = harmonic_spectrum(*arch_b, omega, 1.0, sc, 7);
        bool ok = true;
        for (int n : {3, 5, 7}) ok &= sa.relative_magnitude(n) < sb.relative_magnitude(n);
        ok &= sa.relative_magnitude(3) > sa.relative_magnitude(5);
        ok &= sa.relative_magnitude(5) > sa.relative_magnitude(7);
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "a: %.3g/%.3g/%.3g  b: %.3g/%.3g/%.3g (n = 3/5/7)",
                      sa.relative_magnitude(3), sa.relative_magnitude(5),
                      sa.relative_magnitude(7), sb.relative_magnitude(3),
                      sb.relative_magnitude(5), sb.relative_magnitude(7));
        return std::make_pair(ok, std::string(buf));
    });

    // 5 -- sector and continuity invariants under randomized parameters
    guarded(5, "sector and continuity hold over 1000 random configurations", [] {
        std::mt19937 rng(987654321u);
        std::uniform_real_distribution<double> wd(0.2, 15.0), kd(0.2, 5.0), ad(0.0, 1.0),
            fd(0.5, 10.0), md(0.1, 1.0);
        const double dt = 5e-4;
        const std::size_t n = 4000;
        int sector_bad = 0, cont_bad = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const HigsParams p(wd(rng), kd(rng), ad(rng));
            const double w1 = fd(rng), w2 = fd(rng);
            const auto e = make_multisine({{1.0, w1}, {md(rng), w2}}, dt, n);
            FractionalHigs filt(p);
            const auto u = filt.process(e);
            double max_e = 0.0;
            for (double v : e.values) max_e = std::max(max_e, std::abs(v));
            const double tol = 10.0 * dt * p.omega_h * max_e;
            const double wmax = std::max(w1, w2);
            const double slope = p.omega_h * max_e * std::max(1.0, wmax) + tol / dt;
            for (std::size_t i = 0; i < n; ++i) {
                const double lo = std::min(0.0, p.k_h * e.values[i]) - tol;
                const double hi = std::max(0.0, p.k_h * e.values[i]) + tol;
                if (u.values[i] < lo || u.values[i] > hi) ++sector_bad;
                if (i > 0) {
                    const double de = std::abs(e.values[i] - e.values[i - 1]);
                    if (std::abs(u.values[i] - u.values[i - 1]) >
                        p.k_h * de + slope * dt + tol)
                        ++cont_bad;
                }
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "sector violations %d, continuity violations %d",
                      sector_bad, cont_bad);
        return std::make_pair(sector_bad == 0 && cont_bad == 0, std::string(buf));
    });

    // 6 -- step response improves monotonically with the fractional order
    guarded(6, "overshoot and settling time decrease across alpha = 0, 0.5, 1", [] {
        const double dt = 1e-5;
        const std::size_t n = 20000;  // 0.2 s
        const auto ref = make_step(1.0, dt, n);
        SimConfig sc;
        sc.dt = dt;
        std::vector<double> os, st;
        for (double a : {0.0, 0.5, 1.0}) {
            auto c = build_pid(200.0 * kPi, a);
            const auto res = simulate_closed_loop(*c, Plant{1.0}, ref, sc);
            const auto m = step_metrics(res.position, 1.0);
            os.push_back(m.overshoot_pct);
            st.push_back(m.settling_time);
        }
        const bool ok = os[0] > os[1] && os[1] > os[2] && st[0] > st[1] && st[1] > st[2];
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "overshoot %% = %.2f/%.2f/%.2f, settling ms = %.2f/%.2f/%.2f", os[0],
                      os[1], os[2], st[0] * 1e3, st[1] * 1e3, st[2] * 1e3);
        return std::make_pair(ok, std::string(buf));
    });

    // 7 -- at alpha = 0 the loop is linear; cross-check with the state-space oracle
    guarded(7, "alpha = 0 closed loop matches the linear oracle within 1 % RMS", [] {
        const double dt = 1e-5;
        const std::size_t n = 20000;
        const auto ref = make_step(1.0, dt, n);
        SimConfig sc;
        sc.dt = dt;
        const auto params = PidParams::defaults(200.0 * kPi);
        auto c = build_pid(params, 0.0);
        const auto res = simulate_closed_loop(*c, Plant{1.0}, ref, sc);
        const auto oracle = linear_closed_loop_step(params, 1.0, dt, n);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = res.position.values[i] - oracle.values[i];
            num += d * d;
            den += oracle.values[i] * oracle.values[i];
        }
        const double rel = std::sqrt(num / den);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "relative RMS = %.3g", rel);
        return std::make_pair(rel < 0.01, std::string(buf));
    });

    // 8 -- the discrete fractional derivative follows the sinusoid rule
    guarded(8, "frac diff of a sinusoid matches w^a gain and a*90deg lead (1 %, 1 deg)", [] {
        const double omega = 2.0, dt = 1e-4;
        const std::size_t n = static_cast<std::size_t>(40.0 * kPi / omega / dt);
        const auto x = make_sine(1.0, omega, dt, n);
        bool ok = true;
        double worst_amp = 0.0, worst_ph = 0.0;
        for (double a : {0.25, 0.5, 0.75}) {
            const auto y = gl_apply_series(x.values, dt, a);
            const auto h1 = first_harmonic(y, dt, omega, n / 2);
            const auto [amp, phase] = sinusoid_frac_rule(1.0, omega, a);
            const double got_amp = std::abs(h1);
            const double got_ph = std::atan2(h1.imag(), h1.real());
            worst_amp = std::max(worst_amp, std::abs(got_amp / amp - 1.0));
            worst_ph = std::max(worst_ph, std::abs(got_ph - phase) * 180.0 / kPi);
        }
        ok = worst_amp < 0.01 && worst_ph < 1.0;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "worst amp err %.3g, worst phase err %.3g deg",
                      worst_amp, worst_ph);
        return std::make_pair(ok, std::string(buf));
    });

    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
