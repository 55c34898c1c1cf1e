#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fhigs/block.hpp"
#include "fhigs/linear_ss.hpp"
#include "fhigs/sim.hpp"

using namespace fhigs;
namespace {
constexpr double kPi = std::numbers::pi;

// second-order lag 1/(s^2/wn^2 + 2 z s/wn + 1) built from two blocks is
// awkward; use the state-space oracle instead for step-metric checks
TimeSeries second_order_step(double wn, double zeta, double dt, std::size_t n) {
    TransferFunction tf{{1.0}, {1.0, 2.0 * zeta / wn, 1.0 / (wn * wn)}};
    LinearStateSpace ss(tf);
    std::vector<double> y;
    y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ss.step(1.0, dt);
        y.push_back(ss.output(1.0));
    }
    return TimeSeries(0.0, dt, std::move(y));
}
}  // namespace

TEST_CASE("empirical frequency response of a first-order lag") {
    RationalFilterBlock lpf(RationalFracFilter::low_pass(1.0, 10.0, 1e5, 1));
    SimConfig sc;
    sc.dt = 1e-5;
    const auto p = estimate_df(lpf, 10.0, 1.0, sc);  // at the cut-off
    REQUIRE(std::abs(p.value) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(0.005));
    REQUIRE(std::arg(p.value) * 180.0 / kPi == Catch::Approx(-45.0).margin(0.5));
}

TEST_CASE("harmonic spectrum of a linear block is clean") {
    RationalFilterBlock lpf(RationalFracFilter::low_pass(1.0, 5.0, 1e4, 1));
    SimConfig sc;
    sc.dt = 1e-5;
    const auto spec = harmonic_spectrum(lpf, 3.0, 2.0, sc, 6);
    for (int n : {2, 3, 4, 5, 6}) REQUIRE(spec.relative_magnitude(n) < 1e-6);
}

TEST_CASE("step metrics: underdamped second-order oracle") {
    // zeta = 0.5: overshoot exp(-pi zeta / sqrt(1 - zeta^2)) = 16.30 %
    const double wn = 50.0, dt = 1e-5;
    const auto y = second_order_step(wn, 0.5, dt, 100000);
    const auto m = step_metrics(y, 1.0);
    REQUIRE(m.overshoot_pct == Catch::Approx(16.30).margin(0.5));
    REQUIRE(m.settled);
    // settling time ballpark for 2 % band: ~ 4 / (zeta wn)
    REQUIRE(m.settling_time == Catch::Approx(4.0 / (0.5 * wn)).margin(0.1));
    REQUIRE(m.steady_state_error == Catch::Approx(0.0).margin(1e-4));
    REQUIRE(m.rise_time > 0.0);
}

TEST_CASE("step metrics: no overshoot when critically damped") {
    const auto y = second_order_step(50.0, 1.0, 1e-5, 100000);
    const auto m = step_metrics(y, 1.0);
    REQUIRE(m.overshoot_pct == Catch::Approx(0.0).margin(0.05));
}

TEST_CASE("closed loop with a pure gain controller matches the analytic loop") {
    // C = k, P = 1/(m s^2): undamped oscillator at sqrt(k/m), unit mean
    const double k = 100.0, mass = 1.0, dt = 1e-5;
    GainBlock ctrl(k);
    const std::size_t n = 50000;
    const auto ref = make_step(1.0, dt, n);
    SimConfig sc;
    sc.dt = dt;
    const auto res = simulate_closed_loop(ctrl, Plant{mass}, ref, sc);
    const double wn = std::sqrt(k / mass);
    for (std::size_t i = 2000; i < n; i += 503) {
        const double t = i * dt;
        REQUIRE(res.position.values[i] ==
                Catch::Approx(1.0 - std::cos(wn * t)).margin(0.01));
    }
}

TEST_CASE("simulation is deterministic") {
    auto c1 = build_pid(200.0 * kPi, 0.5);
    auto c2 = build_pid(200.0 * kPi, 0.5);
    SimConfig sc;
    sc.dt = 1e-5;
    const auto ref = make_step(1.0, sc.dt, 5000);
    const auto r1 = simulate_closed_loop(*c1, Plant{1.0}, ref, sc);
    const auto r2 = simulate_closed_loop(*c2, Plant{1.0}, ref, sc);
    for (std::size_t i = 0; i < ref.values.size(); ++i)
        REQUIRE(r1.position.values[i] == r2.position.values[i]);
}

TEST_CASE("closed-loop response converges as dt is refined") {
    auto run_at = [&](double dt) {
        auto c = build_pid(200.0 * kPi, 1.0);
        SimConfig sc;
        sc.dt = dt;
        const std::size_t n = static_cast<std::size_t>(std::llround(0.05 / dt));
        const auto ref = make_step(1.0, dt, n);
        return simulate_closed_loop(*c, Plant{1.0}, ref, sc).position.values.back();
    };
    const double coarse = run_at(2e-5);
    const double fine = run_at(1e-5);
    const double finer = run_at(5e-6);
    REQUIRE(std::abs(fine - finer) < std::abs(coarse - fine) + 1e-6);
    REQUIRE(std::abs(fine - finer) < 1e-3);
}

TEST_CASE("transfer-function algebra: series, parallel, feedback") {
    const TransferFunction g{{2.0}, {1.0, 1.0}};          // 2/(1+s)
    const TransferFunction h{{1.0, 1.0}, {1.0}};          // 1+s
    const auto gh = g.series(h);
    REQUIRE(std::abs(gh.response(3.0) - std::complex<double>(2.0, 0.0)) < 1e-12);
    const auto sum = g.parallel(h);
    REQUIRE(std::abs(sum.response(1.0) - (g.response(1.0) + h.response(1.0))) < 1e-12);
    const auto cl = g.close_unity_feedback();
    const auto want = g.response(2.0) / (1.0 + g.response(2.0));
    REQUIRE(std::abs(cl.response(2.0) - want) < 1e-12);
}

TEST_CASE("linear oracle reproduces a textbook loop") {
    // controller k, plant 1/s^2: closed loop 1 - cos(sqrt(k) t)
    const double k = 400.0, dt = 1e-5;
    PidParams p{};
    // bypass the full chain: check LinearStateSpace directly on k/(s^2 + k)
    (void)p;
    TransferFunction cl{{k}, {k, 0.0, 1.0}};
    LinearStateSpace ss(cl);
    for (int i = 1; i <= 20000; ++i) {
        ss.step(1.0, dt);
        const double y = ss.output(1.0);
        if (i % 4999 == 0) {
            const double t = i * dt;
            REQUIRE(y == Catch::Approx(1.0 - std::cos(std::sqrt(k) * t)).margin(1e-3));
        }
    }
}

TEST_CASE("steady-state check rejects non-periodic signals") {
    // an integrator never settles under sinusoid drive with bias
    struct Biased : Block {
        IntegratorBlock inner;
        double step(double x, double dt) override { return inner.step(x + 0.5, dt); }
        void reset() override { inner.reset(); }
        std::unique_ptr<Block> clone() const override { return std::make_unique<Biased>(*this); }
    } biased;
    SimConfig sc;
    sc.dt = 1e-4;
    REQUIRE_THROWS_WITH(estimate_df(biased, 5.0, 1.0, sc),
                        Catch::Matchers::ContainsSubstring("steady state"));
}
