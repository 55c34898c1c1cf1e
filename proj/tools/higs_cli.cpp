// Command-line front end: describing-function sweeps, time-domain filter
// runs, harmonic comparisons of the two generalized architectures, and the
// closed-loop step-response study. Emits CSV data files plus one JSON
// manifest per run.

#include <atomic>
#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fhigs/architectures.hpp"
#include "fhigs/describing_function.hpp"
#include "fhigs/io.hpp"
#include "fhigs/linear_ss.hpp"
#include "fhigs/sim.hpp"
#include "fhigs/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    double dt = 1e-5;
    double duration = 0.0;  // 0 = command default
    int parallel = 1;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw CLI::ValidationError("--config", "cannot open " + path);
    json j;
    f >> j;
    return j;
}

/// Flags override config-file values: only apply the file value when the
/// flag was not given on the command line.
template <typename T>
void apply_config(const json& cfg, const std::string& section, const std::string& key,
                  const CLI::App& app, const std::string& flag, T& out) {
    if (app.count(flag) > 0) return;
    if (cfg.contains(section) && cfg[section].contains(key)) out = cfg[section][key].get<T>();
}

void write_manifest(const GlobalOpts& g, const std::string& command, const json& resolved,
                    const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    m["config"] = resolved;
    m["tool_version"] = fhigs::kVersion;
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    m["timestamp"] = buf;
    m["outputs"] = outputs;
    std::ofstream f(fs::path(g.out_dir) / ("manifest_" + command + ".json"));
    f << m.dump(2) << '\n';
}

double mag_db(std::complex<double> v) { return 20.0 * std::log10(std::abs(v)); }
double phase_deg(std::complex<double> v) { return std::arg(v) * 180.0 / M_PI; }

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = lo * std::pow(hi / lo, points == 1 ? 0.0 : double(i) / (points - 1));
    return g;
}

/// Run fn(i) for i in [0, n) on up to n_threads workers.
void parallel_for(int n, int n_threads, const std::function<void(int)>& fn) {
    if (n_threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(n_threads, n); ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------- df -------

int cmd_df(const GlobalOpts& g, const json& cfg, CLI::App& app, double wh, double kh,
           std::vector<double> alphas, double ehat, double wmin, double wmax, int points,
           std::string source) {
    if (alphas.empty()) alphas = {1.0};
    const auto grid = log_grid(wmin, wmax, points);
    const bool closed = source == "closed_form" || source == "both";
    const bool empirical = source == "empirical" || source == "both";

    fhigs::CsvWriter csv({"omega_rad_s", "alpha", "mag_db", "phase_deg", "gamma_rad", "source"});
    struct Row {
        double w, a, mag, ph, gamma;
        std::string src;
    };
    std::vector<std::tuple<double, double, bool>> jobs;  // alpha, omega, empirical?
    for (double a : alphas)
        for (double w : grid) {
            if (closed) jobs.emplace_back(a, w, false);
            if (empirical) jobs.emplace_back(a, w, true);
        }
    std::vector<Row> rows(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), g.parallel, [&](int i) {
        const auto [a, w, emp] = jobs[i];
        const fhigs::DfQuery q(w, ehat, fhigs::HigsParams(wh, kh, a));
        if (!emp) {
            const auto p = fhigs::df_fractional(q);
            rows[i] = {w, a, mag_db(p.value), phase_deg(p.value), p.gamma, "closed_form"};
        } else {
            fhigs::HigsBlock block(q.params);
            fhigs::SimConfig sc;
            sc.dt = 2.0 * M_PI / w / 1e4;
            const auto p = fhigs::estimate_df(block, w, ehat, sc);
            rows[i] = {w, a, mag_db(p.value), phase_deg(p.value), 0.0, "empirical"};
        }
    });
    for (const auto& r : rows)
        csv.add_row_mixed({fhigs::format_full(r.w), fhigs::format_full(r.a),
                           fhigs::format_full(r.mag), fhigs::format_full(r.ph),
                           fhigs::format_full(r.gamma), r.src});

    const fs::path out = fs::path(g.out_dir) / "df.csv";
    csv.write(out);
    json resolved = {{"wh", wh},     {"kh", kh},     {"alpha", alphas}, {"ehat", ehat},
                     {"wmin", wmin}, {"wmax", wmax}, {"points", points}, {"source", source}};
    write_manifest(g, "df", resolved, {out.string()});
    (void)cfg;
    (void)app;
    return 0;
}

// ---------------------------------------------------------- simulate -------

int cmd_simulate(const GlobalOpts& g, double wh, double kh, std::vector<double> alphas,
                 const std::string& input_kind, double omega, double amp, double amp3,
                 double duration) {
    if (alphas.empty()) alphas = {1.0};
    const double period = 2.0 * M_PI / omega;
    const double dur = duration > 0.0 ? duration : 4.0 * period;
    const std::size_t n = static_cast<std::size_t>(std::llround(dur / g.dt));

    fhigs::TimeSeries input;
    if (input_kind == "sine") {
        input = fhigs::make_sine(amp, omega, g.dt, n);
    } else if (input_kind == "multisine") {
        input = fhigs::make_multisine({{amp, omega}, {amp3, 3.0 * omega}}, g.dt, n);
    } else if (input_kind == "step") {
        input = fhigs::make_step(amp, g.dt, n);
    } else {
        std::cerr << "unknown input kind: " << input_kind << '\n';
        return kExitConfigError;
    }

    std::vector<std::string> outputs;
    for (double a : alphas) {
        fhigs::FractionalHigs filter(fhigs::HigsParams(wh, kh, a));
        // streaming run so the mode trace is sampled alongside the output
        fhigs::CsvWriter csv({"t", "e", "u", "mode"});
        for (std::size_t i = 0; i < n; ++i) {
            const double u = filter.step(input.values[i], g.dt);
            csv.add_row({input.time_at(i), input.values[i], u,
                         filter.mode() == fhigs::HigsMode::Integrator ? 1.0 : 0.0});
        }
        char name[64];
        std::snprintf(name, sizeof(name), "sim_alpha%.3f.csv", a);
        const fs::path out = fs::path(g.out_dir) / name;
        csv.write(out);
        outputs.push_back(out.string());
    }
    json resolved = {{"wh", wh},       {"kh", kh},   {"alpha", alphas},
                     {"input", input_kind}, {"omega", omega}, {"amp", amp},
                     {"amp3", amp3},   {"dt", g.dt}, {"duration", dur}};
    write_manifest(g, "simulate", resolved, outputs);
    return 0;
}

// --------------------------------------------------------- harmonics -------

int cmd_harmonics(const GlobalOpts& g, double wh, double kh, double wr, double alpha,
                  double beta, double omega, double ehat, int nmax,
                  std::vector<double> alpha_grid, std::vector<double> beta_grid) {
    fhigs::SimConfig sc;
    sc.dt = 2.0 * M_PI / omega / 4000.0;
    sc.settle_periods = 20;
    sc.analysis_periods = 4;

    auto arch_a_spectrum = [&](double a) {
        fhigs::ArchAConfig ca;
        ca.higs = fhigs::HigsParams(wh, kh, a);
        ca.omega_r = wr;
        auto block = fhigs::make_arch_a(ca);
        return fhigs::harmonic_spectrum(*block, omega, ehat, sc, nmax);
    };
    auto arch_b_spectrum = [&](double b) {
        fhigs::ArchBConfig cb;
        cb.beta = b;
        cb.higs = fhigs::HigsParams(wh, kh, 1.0);
        cb.lpf_cut = wr;
        auto block = fhigs::make_arch_b(cb);
        return fhigs::harmonic_spectrum(*block, omega, ehat, sc, nmax);
    };

    std::vector<std::string> outputs;
    {
        const auto sa = arch_a_spectrum(alpha);
        const auto sb = arch_b_spectrum(beta);
        fhigs::CsvWriter csv({"harmonic_n", "arch_a_rel_mag", "arch_b_rel_mag"});
        for (int n2 = 1; n2 <= nmax; ++n2)
            csv.add_row({double(n2), sa.relative_magnitude(n2), sb.relative_magnitude(n2)});
        const fs::path out = fs::path(g.out_dir) / "harmonics.csv";
        csv.write(out);
        outputs.push_back(out.string());
    }
    {
        // third harmonic against first-harmonic phase, swept over alpha/beta
        fhigs::CsvWriter csv({"arch", "param", "phase_deg", "third_rel_mag"});
        for (double a : alpha_grid) {
            const auto s = arch_a_spectrum(a);
            csv.add_row_mixed({"a", fhigs::format_full(a),
                               fhigs::format_full(phase_deg(s.harmonics.at(1))),
                               fhigs::format_full(s.relative_magnitude(3))});
        }
        for (double b : beta_grid) {
            const auto s = arch_b_spectrum(b);
            csv.add_row_mixed({"b", fhigs::format_full(b),
                               fhigs::format_full(phase_deg(s.harmonics.at(1))),
                               fhigs::format_full(s.relative_magnitude(3))});
        }
        const fs::path out = fs::path(g.out_dir) / "third_harmonic.csv";
        csv.write(out);
        outputs.push_back(out.string());
    }
    json resolved = {{"wh", wh},     {"kh", kh},       {"wr", wr},     {"alpha", alpha},
                     {"beta", beta}, {"omega", omega}, {"ehat", ehat}, {"nmax", nmax},
                     {"alpha_grid", alpha_grid}, {"beta_grid", beta_grid}};
    write_manifest(g, "harmonics", resolved, outputs);
    return 0;
}

// -------------------------------------------------------------- step -------

int cmd_step(const GlobalOpts& g, double wc, std::vector<double> alphas, double mass,
             bool oracle_check, double duration) {
    if (alphas.empty()) alphas = {0.0, 0.5, 1.0};
    const auto params = fhigs::PidParams::defaults(wc);
    fhigs::SimConfig sc;
    sc.dt = g.dt;
    const double dur = duration > 0.0 ? duration : 0.2;
    const std::size_t n = static_cast<std::size_t>(std::llround(dur / sc.dt));
    const fhigs::TimeSeries ref = fhigs::make_step(1.0, sc.dt, n);
    const fhigs::Plant plant(mass);

    std::vector<std::string> outputs;
    fhigs::CsvWriter metrics(
        {"alpha", "overshoot_pct", "settling_time_s", "rise_time_s", "steady_state_error"});
    for (double a : alphas) {
        auto controller = fhigs::build_pid(params, a);
        const auto res = fhigs::simulate_closed_loop(*controller, plant, ref, sc);
        fhigs::CsvWriter csv({"t", "y", "u"});
        for (std::size_t i = 0; i < n; ++i)
            csv.add_row({ref.time_at(i), res.position.values[i], res.control_effort.values[i]});
        char name[64];
        std::snprintf(name, sizeof(name), "step_alpha%.3f.csv", a);
        const fs::path out = fs::path(g.out_dir) / name;
        csv.write(out);
        outputs.push_back(out.string());

        const auto m = fhigs::step_metrics(res.position, 1.0);
        metrics.add_row({a, m.overshoot_pct, m.settling_time, m.rise_time,
                         m.steady_state_error});
    }
    const fs::path mout = fs::path(g.out_dir) / "step_metrics.csv";
    metrics.write(mout);
    outputs.push_back(mout.string());

    if (oracle_check) {
        auto controller = fhigs::build_pid(params, 0.0);
        const auto res = fhigs::simulate_closed_loop(*controller, plant, ref, sc);
        const auto oracle = fhigs::linear_closed_loop_step(params, mass, sc.dt, n);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = res.position.values[i] - oracle.values[i];
            num += d * d;
            den += oracle.values[i] * oracle.values[i];
        }
        const double rel_rms = std::sqrt(num / den);
        std::cout << "linear-oracle relative RMS error (alpha=0): "
                  << fhigs::format_full(rel_rms) << '\n';
    }
    json resolved = {{"wc", wc},       {"alpha", alphas}, {"mass", mass},
                     {"dt", sc.dt},    {"duration", dur}, {"oracle_check", oracle_check}};
    write_manifest(g, "step", resolved, outputs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid integrator-gain filter toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config file; flags override its values");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--dt", g.dt, "sample period, s");
    app.add_option("--duration", g.duration, "simulation horizon, s");
    app.add_option("--parallel", g.parallel, "worker threads for sweeps");

    // df
    auto* df = app.add_subcommand("df", "describing-function frequency sweep");
    double wh = 1.0, kh = 1.0, ehat = 1.0, wmin = 0.01, wmax = 100.0;
    int points = 200;
    std::vector<double> alphas;
    std::string source = "closed_form";
    df->add_option("--wh", wh, "integral frequency, rad/s");
    df->add_option("--kh", kh, "gain value");
    df->add_option("--alpha", alphas, "integrator order(s)")->expected(-1);
    df->add_option("--ehat", ehat, "input amplitude");
    df->add_option("--wmin", wmin, "grid start, rad/s");
    df->add_option("--wmax", wmax, "grid end, rad/s");
    df->add_option("--points", points, "grid size");
    df->add_option("--source", source, "closed_form | empirical | both")
        ->check(CLI::IsMember({"closed_form", "empirical", "both"}));

    // simulate
    auto* sim = app.add_subcommand("simulate", "time-domain filter run");
    double s_wh = 1.0, s_kh = 1.0, s_omega = 1.0, s_amp = 1.0, s_amp3 = 0.7;
    std::vector<double> s_alphas;
    std::string input_kind = "sine";
    sim->add_option("--wh", s_wh, "integral frequency, rad/s");
    sim->add_option("--kh", s_kh, "gain value");
    sim->add_option("--alpha", s_alphas, "integrator order(s)")->expected(-1);
    sim->add_option("--input", input_kind, "sine | multisine | step")
        ->check(CLI::IsMember({"sine", "multisine", "step"}));
    sim->add_option("--omega", s_omega, "base frequency, rad/s");
    sim->add_option("--amp", s_amp, "input amplitude");
    sim->add_option("--amp3", s_amp3, "third-harmonic amplitude (multisine)");

    // harmonics
    auto* har = app.add_subcommand("harmonics", "architecture harmonic comparison");
    double h_wh = 1.0, h_kh = 1.0, h_wr = 1.0, h_alpha = 0.68, h_beta = 0.5,
           h_omega = 100.0, h_ehat = 1.0;
    int h_nmax = 9;
    std::vector<double> alpha_grid{0.2, 0.4, 0.6, 0.68, 0.8, 1.0};
    std::vector<double> beta_grid{0.2, 0.4, 0.5, 0.6, 0.8, 1.0};
    har->add_option("--wh", h_wh, "integral frequency, rad/s");
    har->add_option("--kh", h_kh, "gain value");
    har->add_option("--wr", h_wr, "cut-off frequency, rad/s");
    har->add_option("--alpha", h_alpha, "architecture a order");
    har->add_option("--beta", h_beta, "architecture b blend");
    har->add_option("--omega", h_omega, "test frequency, rad/s");
    har->add_option("--ehat", h_ehat, "input amplitude");
    har->add_option("--nmax", h_nmax, "highest harmonic");
    har->add_option("--alpha-grid", alpha_grid, "alpha sweep")->expected(-1);
    har->add_option("--beta-grid", beta_grid, "beta sweep")->expected(-1);

    // step
    auto* stp = app.add_subcommand("step", "closed-loop step response");
    double wc = 200.0 * M_PI, mass = 1.0;
    std::vector<double> p_alphas;
    bool oracle_check = false;
    stp->add_option("--wc", wc, "crossover frequency, rad/s");
    stp->add_option("--alpha", p_alphas, "integrator order(s)")->expected(-1);
    stp->add_option("--mass", mass, "plant mass, kg");
    stp->add_flag("--oracle", oracle_check, "cross-check alpha=0 against the linear oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    try {
        const json cfg = load_config(g.config_path);
        apply_config(cfg, "global", "out", app, "--out", g.out_dir);
        apply_config(cfg, "global", "dt", app, "--dt", g.dt);
        apply_config(cfg, "global", "duration", app, "--duration", g.duration);
        apply_config(cfg, "global", "parallel", app, "--parallel", g.parallel);
        if (g.dt <= 0.0) throw std::invalid_argument("--dt must be > 0");
        if (g.duration < 0.0) throw std::invalid_argument("--duration must be > 0");
        if (g.parallel < 1) throw std::invalid_argument("--parallel must be >= 1");
        fs::create_directories(g.out_dir);

        if (df->parsed()) {
            apply_config(cfg, "df", "wh", *df, "--wh", wh);
            apply_config(cfg, "df", "kh", *df, "--kh", kh);
            apply_config(cfg, "df", "ehat", *df, "--ehat", ehat);
            apply_config(cfg, "df", "wmin", *df, "--wmin", wmin);
            apply_config(cfg, "df", "wmax", *df, "--wmax", wmax);
            apply_config(cfg, "df", "points", *df, "--points", points);
            apply_config(cfg, "df", "source", *df, "--source", source);
            apply_config(cfg, "df", "alpha", *df, "--alpha", alphas);
            if (points < 1) throw std::invalid_argument("--points must be >= 1");
            if (wmin <= 0.0 || wmax < wmin)
                throw std::invalid_argument("need 0 < --wmin <= --wmax");
            return cmd_df(g, cfg, app, wh, kh, alphas, ehat, wmin, wmax, points, source);
        }
        if (sim->parsed()) {
            apply_config(cfg, "simulate", "wh", *sim, "--wh", s_wh);
            apply_config(cfg, "simulate", "kh", *sim, "--kh", s_kh);
            apply_config(cfg, "simulate", "alpha", *sim, "--alpha", s_alphas);
            apply_config(cfg, "simulate", "input", *sim, "--input", input_kind);
            apply_config(cfg, "simulate", "omega", *sim, "--omega", s_omega);
            apply_config(cfg, "simulate", "amp", *sim, "--amp", s_amp);
            apply_config(cfg, "simulate", "amp3", *sim, "--amp3", s_amp3);
            if (s_omega <= 0.0) throw std::invalid_argument("--omega must be > 0");
            return cmd_simulate(g, s_wh, s_kh, s_alphas, input_kind, s_omega, s_amp, s_amp3,
                                g.duration);
        }
        if (har->parsed()) {
            apply_config(cfg, "harmonics", "wh", *har, "--wh", h_wh);
            apply_config(cfg, "harmonics", "kh", *har, "--kh", h_kh);
            apply_config(cfg, "harmonics", "wr", *har, "--wr", h_wr);
            apply_config(cfg, "harmonics", "alpha", *har, "--alpha", h_alpha);
            apply_config(cfg, "harmonics", "beta", *har, "--beta", h_beta);
            apply_config(cfg, "harmonics", "omega", *har, "--omega", h_omega);
            apply_config(cfg, "harmonics", "ehat", *har, "--ehat", h_ehat);
            apply_config(cfg, "harmonics", "nmax", *har, "--nmax", h_nmax);
            if (h_nmax < 1) throw std::invalid_argument("--nmax must be >= 1");
            if (h_omega <= 0.0) throw std::invalid_argument("--omega must be > 0");
            return cmd_harmonics(g, h_wh, h_kh, h_wr, h_alpha, h_beta, h_omega, h_ehat, h_nmax,
                                 alpha_grid, beta_grid);
        }
        if (stp->parsed()) {
            apply_config(cfg, "step", "wc", *stp, "--wc", wc);
            apply_config(cfg, "step", "alpha", *stp, "--alpha", p_alphas);
            apply_config(cfg, "step", "mass", *stp, "--mass", mass);
            return cmd_step(g, wc, p_alphas, mass, oracle_check, g.duration);
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    }
    return 0;
}
