#pragma once

// Command-line front end. `run` takes the arguments after the program name and
// returns the process exit code: 0 success, 2 input error, 3 non-convergence.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "engcalc/config.hpp"
#include "engcalc/diffnum.hpp"
#include "engcalc/error.hpp"
#include "engcalc/funcexpr.hpp"
#include "engcalc/lti.hpp"
#include "engcalc/mech.hpp"
#include "engcalc/odo.hpp"
#include "engcalc/opt.hpp"
#include "engcalc/quad.hpp"
#include "engcalc/signal.hpp"
#include "engcalc/svg.hpp"

namespace engcalc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNoConvergence = 3;

namespace detail {

// FNV-1a over file bytes; enough to tell inputs apart in a run report.
inline std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "unreadable";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
        h ^= static_cast<unsigned char>(*it);
        h *= 0x100000001b3ULL;
    }
    return fmt::format("fnv1a64:{:016x}", h);
}

struct Report {
    std::vector<std::string> command;
    std::uint64_t seed = 1;
    std::map<std::string, std::string> inputs;
    nlohmann::ordered_json headline = nlohmann::ordered_json::object();
    std::vector<std::string> outputs;

    void input(const std::string& path) { inputs[path] = digest_file(path); }
    void output(const std::string& path) { outputs.push_back(path); }
};

inline std::string fmt_vec(const Vec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt::format("{:.10g}", v[i]);
    return s + "]";
}

inline void print_matrix(std::ostream& out, const std::string& name, const Mat& m) {
    out << name << " =\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out << fmt::format("{:>14.6g}", m(r, c));
        out << '\n';
    }
}

inline void print_poles(std::ostream& out, const std::string& title, const std::vector<Complex>& ps) {
    out << title << ":\n" << fmt::format("{:>16} {:>16}\n", "real", "imag");
    for (const Complex& p : ps) out << fmt::format("{:>16.8g} {:>16.8g}\n", p.real(), p.imag());
}

inline void print_metrics(std::ostream& out, const lti::StepMetrics& m) {
    out << fmt::format("steady state:  {:.6f}\n", m.steady_state);
    out << fmt::format("rise time:     {:.6g} s\n", m.rise_time);
    out << fmt::format("overshoot:     {:.6g}\n", m.overshoot);
    out << fmt::format("settling time: {:.6g} s\n", m.settling_time);
}

inline Vec to_vec(const std::vector<double>& xs) { return Vec(std::vector<double>(xs)); }

inline Vec or_zeros(const std::vector<double>& xs, std::size_t n) { return xs.empty() ? Vec(n) : to_vec(xs); }

// Prints the parse error with a caret under the offending character.
inline void report_parse_error(std::ostream& err, const std::string& text, const ParseError& e) {
    err << "error: " << e.what() << '\n' << "  " << text << '\n' << "  " << std::string(e.position(), ' ') << "^\n";
}

inline void require_names(const SampledSignal& sig, const std::string& prefix, const std::string& what) {
    const auto expected = odo::axis_names(prefix, sig.dim());
    if (sig.dim() < 1 || sig.dim() > 3 || sig.names() != expected) {
        throw DomainError(what + " CSV header must be t," + prefix + "x[," + prefix + "y[," + prefix + "z]]");
    }
}

inline void save_csv(Report& rep, const std::string& path, const SampledSignal& sig) {
    write_csv(path, sig);
    rep.output(path);
}

inline void save_svg(Report& rep, const std::string& path, const SampledSignal& sig, const std::vector<svg::Panel>& p) {
    svg::write_svg(path, sig, p);
    rep.output(path);
}

inline std::vector<std::size_t> range(std::size_t from, std::size_t count) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(from + i);
    return out;
}

// ---- integrate / differentiate ------------------------------------------------

struct IntegrateOpts {
    std::string expr, var = "x", method = "simpson";
    double a = 0.0, b = 1.0;
    std::size_t n = 100, m = 16;
};

inline int cmd_integrate(const IntegrateOpts& o, std::ostream& out, Report& rep) {
    const auto f = expr::function_of(o.expr, o.var);
    const quad::Interval iv{o.a, o.b};
    double value = 0.0;
    if (o.method == "darboux") {
        const auto bounds = quad::darboux_bounds(f, iv, o.n, o.m);
        value = 0.5 * (bounds.lower + bounds.upper);
        out << fmt::format("{:.12g}\n", value);
        out << fmt::format("lower {:.12g}\nupper {:.12g}\n", bounds.lower, bounds.upper);
        rep.headline["lower"] = bounds.lower;
        rep.headline["upper"] = bounds.upper;
    } else {
        if (o.method == "riemann-left") value = quad::riemann_sum(f, iv, o.n, quad::RiemannScheme::left);
        else if (o.method == "riemann-right") value = quad::riemann_sum(f, iv, o.n, quad::RiemannScheme::right);
        else if (o.method == "midpoint") value = quad::riemann_sum(f, iv, o.n, quad::RiemannScheme::midpoint);
        else if (o.method == "trapezoid") value = quad::trapezoid(f, iv, o.n);
        else value = quad::simpson(f, iv, o.n);
        out << fmt::format("{:.12g}\n", value);
    }
    rep.headline["value"] = value;
    return kExitOk;
}

struct DifferentiateOpts {
    std::string expr, var = "x";
    double at = 0.0;
    int order = 1;
    std::optional<double> h;
};

inline int cmd_differentiate(const DifferentiateOpts& o, std::ostream& out, Report& rep) {
    const auto f = expr::function_of(o.expr, o.var);
    double value = 0.0;
    if (o.order == 1) {
        diff::DiffConfig cfg = diff::DiffConfig::first_order();
        if (o.h) cfg.h = *o.h;
        value = diff::derivative(f, o.at, cfg);
    } else {
        diff::DiffConfig cfg = diff::DiffConfig::second_order();
        if (o.h) cfg.h = *o.h;
        const auto g = [&f](const Vec& x) { return f(x[0]); };
        value = diff::hessian(g, Vec{o.at}, cfg)(0, 0);
    }
    out << fmt::format("{:.12g}\n", value);
    rep.headline["value"] = value;
    return kExitOk;
}

// ---- project 1: odometry -----------------------------------------------------

struct Project1Opts {
    std::string imu, meas, out, plot;
    double l1 = 0.0, l2 = 0.0;
    std::vector<double> v0, p0, b0;
};

inline int cmd_project1(const Project1Opts& o, std::ostream& out, Report& rep) {
    rep.input(o.imu);
    const SampledSignal trace = read_csv(o.imu);
    require_names(trace, "a", "imu");
    const std::size_t d = trace.dim();
    std::vector<odo::VelMeasurement> meas;
    if (!o.meas.empty()) {
        rep.input(o.meas);
        const SampledSignal ms = read_csv(o.meas);
        require_names(ms, "v", "measurement");
        if (ms.dim() != d) throw DimensionError("measurement CSV axes do not match the imu trace");
        for (std::size_t k = 0; k < ms.size(); ++k) meas.push_back({ms.time(k), ms.sample(k)});
    }
    const auto r = odo::bias_corrected_odometry(trace, meas, {o.l1, o.l2}, or_zeros(o.v0, d), or_zeros(o.p0, d),
                                                or_zeros(o.b0, d));
    const SampledSignal all = hstack({&r.v, &r.p, &r.bias_history});
    save_csv(rep, o.out, all);
    if (!o.plot.empty()) {
        std::vector<svg::Panel> panels{{"velocity", range(0, d)}, {"position", range(d, d)}};
        if (!meas.empty()) panels.push_back({"bias estimate", range(2 * d, d)});
        save_svg(rep, o.plot, all, panels);
    }
    const Vec p_final = r.p.sample(r.p.size() - 1);
    out << "final position: " << fmt_vec(p_final) << '\n';
    out << "final velocity: " << fmt_vec(r.v.sample(r.v.size() - 1)) << '\n';
    out << "bias estimate:  " << fmt_vec(r.final_bias) << '\n';
    rep.headline["final_position"] = p_final.values();
    rep.headline["bias_estimate"] = r.final_bias.values();
    return kExitOk;
}

// ---- project 2: trajectory optimization ----------------------------------------

struct OptimizeOpts {
    std::string scenario, config, mode = "free", trace, out, plot;
    std::optional<double> tf, speed;
    std::optional<int> max_iters;
    std::size_t samples = 101;
};

// Uniform time grid over [0, tf] with `samples` points.
inline std::vector<double> grid(double tf, std::size_t samples) {
    std::vector<double> ts;
    for (std::size_t k = 0; k < samples; ++k) ts.push_back(tf * static_cast<double>(k) / static_cast<double>(samples - 1));
    return ts;
}

inline void write_history(Report& rep, const std::string& path, const std::vector<double>& objective,
                          const std::vector<double>& feasibility) {
    SampledSignal hist(2, {"objective", "feasibility"});
    for (std::size_t k = 0; k < objective.size(); ++k) {
        hist.push_back(static_cast<double>(k), Vec{objective[k], k < feasibility.size() ? feasibility[k] : 0.0});
    }
    save_csv(rep, path, hist);
}

inline opt::DescentConfig with_budget(opt::DescentConfig cfg, const OptimizeOpts& o) {
    if (o.max_iters) cfg.max_iters = *o.max_iters;
    return cfg;
}

inline int cmd_optimize(const OptimizeOpts& o, std::ostream& out, Report& rep) {
    if (o.samples < 2) throw DomainError("--samples must be at least 2");
    config::Json cfg = config::Json::object();
    if (!o.config.empty()) {
        rep.input(o.config);
        cfg = config::load(o.config);
    }
    SampledSignal path;
    std::vector<svg::Panel> panels;
    std::vector<double> obj_hist, feas_hist;

    if (o.scenario == "freethrow") {
        const auto params = config::freethrow_params(cfg);
        opt::FreeThrowMode mode = opt::FreeMode{};
        if (o.mode == "fixed-tf") {
            if (!o.tf) throw DomainError("--mode fixed-tf needs --tf");
            mode = opt::FixedTf{*o.tf};
        } else if (o.mode == "fixed-speed") {
            if (!o.speed) throw DomainError("--mode fixed-speed needs --speed");
            mode = opt::FixedSpeed{*o.speed};
        }
        const auto r = opt::freethrow_opt(params, mode, std::nullopt, with_budget(opt::DescentConfig::armijo(), o));
        out << "release velocity: " << fmt_vec(r.v) << '\n';
        out << fmt::format("flight time: {:.10g} s\n", r.tf);
        out << fmt::format("miss distance: {:.3e} m\n", r.miss_distance);
        if (!r.lambda.empty()) {
            out << "multiplier: " << fmt_vec(r.lambda) << '\n';
            out << fmt::format("constraint residual: {:.3e}\n", r.constraint_residual);
        }
        out << "iterations: " << r.iterations << '\n';
        rep.headline["v"] = r.v.values();
        rep.headline["tf"] = r.tf;
        rep.headline["miss_distance"] = r.miss_distance;
        path = SampledSignal(2, {"x", "y"});
        for (double t : grid(r.tf, o.samples)) path.push_back(t, opt::ballistic(params.p0, r.v, params.g, t));
        panels = {{"ball position", {0, 1}}};
        obj_hist = r.objective_history;
        feas_hist = r.feasibility_history;
    } else if (o.scenario == "gymnast") {
        const auto model = config::gymnast_model(cfg);
        const auto r = opt::gymnast_optimize(model, with_budget(opt::DescentConfig::armijo(), o));
        out << "launch velocity: " << fmt_vec(r.v0) << '\n';
        out << fmt::format("angular velocity: {:.10g} rad/s\n", r.omega);
        out << fmt::format("flight time: {:.10g} s\n", r.tf);
        out << fmt::format("kinetic energy: {:.10g} J\n", r.objective);
        out << "constraint residuals: " << fmt_vec(r.residuals) << '\n';
        out << "iterations: " << r.iterations << '\n';
        rep.headline["v0"] = r.v0.values();
        rep.headline["omega"] = r.omega;
        rep.headline["tf"] = r.tf;
        path = SampledSignal(3, {"x", "y", "theta"});
        for (double t : grid(r.tf, o.samples)) {
            const Vec p = opt::ballistic(model.p0, r.v0, model.g, t);
            path.push_back(t, Vec{p[0], p[1], model.theta0 + r.omega * t});
        }
        panels = {{"center of mass", {0, 1}}, {"rotation", {2}}};
        obj_hist = r.objective_history;
        feas_hist = r.feasibility_history;
    } else if (o.scenario == "diver") {
        const auto model = config::diver_model(cfg);
        const auto r = opt::diver_optimize(model, with_budget(opt::diver_config(), o));
        out << "launch velocity: " << fmt_vec(r.v0) << '\n';
        out << fmt::format("angular momentum: {:.10g}\n", r.L);
        out << fmt::format("tuck window: [{:.10g}, {:.10g}] s\n", r.t_tuck_start, r.t_tuck_end);
        out << fmt::format("entry time: {:.10g} s\n", r.t_entry);
        out << fmt::format("constraint residuals: [{:.3e}, {:.3e}]\n", r.entry_angle_residual, r.clearance_residual);
        out << "iterations: " << r.iterations << '\n';
        rep.headline["v0"] = r.v0.values();
        rep.headline["L"] = r.L;
        rep.headline["t_entry"] = r.t_entry;
        path = SampledSignal(3, {"x", "y", "theta"});
        for (double t : grid(r.t_entry, o.samples)) {
            // Angle so far: open rate outside the tuck window, tuck rate inside.
            const double tuck_time = std::clamp(t, r.t_tuck_start, r.t_tuck_end) - r.t_tuck_start;
            const double angle = r.L / model.I_open * (t - tuck_time) + r.L / model.I_tuck * tuck_time;
            path.push_back(t, Vec{r.v0[0] * t, model.platform_height + r.v0[1] * t - 0.5 * model.g * t * t, angle});
        }
        panels = {{"center of mass", {0, 1}}, {"rotation", {2}}};
        obj_hist = r.objective_history;
        feas_hist = r.feasibility_history;
    } else {
        throw DomainError("unknown scenario '" + o.scenario + "'");
    }
    if (!o.out.empty()) save_csv(rep, o.out, path);
    if (!o.plot.empty()) save_svg(rep, o.plot, path, panels);
    if (!o.trace.empty()) write_history(rep, o.trace, obj_hist, feas_hist);
    return kExitOk;
}

// ---- project 3: simulation and control -------------------------------------------

inline mech::MechanicalModel load_model(const std::string& name, const std::string& config_path, Report& rep) {
    mech::Params params;
    if (!config_path.empty()) {
        rep.input(config_path);
        params = config::model_params(config::load(config_path));
    }
    return mech::make_model(name, params);
}

struct SimulateOpts {
    std::string model, config, out, plot, controller;
    std::vector<double> q0, qd0;
    double T = 5.0, dt = 1e-3, precomp = 1.0, reference = 0.0;
    std::optional<double> kp, kd, wn, zeta;
};

inline int cmd_simulate(const SimulateOpts& o, std::ostream& out, Report& rep) {
    const auto model = load_model(o.model, o.config, rep);
    const std::size_t n = model.n_dof;
    const Vec q0 = to_vec(o.q0);
    const Vec qd0 = or_zeros(o.qd0, n);
    mech::Controller controller;
    std::optional<lti::LeanDesign> design;
    if (o.controller == "pd") {
        if (o.wn && o.zeta) {
            design = lti::design_lean_pd(model, *o.wn, *o.zeta);
        } else {
            if (!o.kp || !o.kd) throw DomainError("--controller pd needs --kp and --kd (or --wn and --zeta)");
            auto [q_eq, lean] = lti::upright_equilibrium(model);
            const auto plant = lti::TransferFunction(Polynomial{1.0}, Polynomial{1.0});
            design = lti::LeanDesign{q_eq, lean, lti::linearize(model, q_eq, Vec(model.n_inputs())), plant,
                                     {*o.kp, *o.kd}, plant, o.precomp};
        }
        controller = lti::lean_pd_controller(*design, o.reference);
        out << fmt::format("pd gains: kp = {:.10g}, kd = {:.10g}, precomp = {:.10g}\n", design->gains.kp,
                           design->gains.kd, design->precomp);
    } else if (!o.controller.empty()) {
        throw DomainError("unknown controller '" + o.controller + "'");
    }
    const SampledSignal states = mech::simulate(model, controller, q0, qd0, o.T, o.dt);
    save_csv(rep, o.out, states);
    if (!o.plot.empty()) save_svg(rep, o.plot, states, {{"positions", range(0, n)}, {"velocities", range(n, n)}});

    const std::size_t last = states.size() - 1;
    if (design) {
        const double lean = states.value(last, design->lean_index) - design->q_eq[design->lean_index];
        const double error = std::abs(lean - o.reference);
        out << fmt::format("final regulation error: {:.6e} rad\n", error);
        rep.headline["regulation_error"] = error;
    } else {
        const double e0 = mech::total_energy(model, q0, qd0);
        double drift = 0.0;
        for (std::size_t k = 0; k < states.size(); ++k) {
            const Vec x = states.sample(k);
            drift = std::max(drift, std::abs(mech::total_energy(model, slice(x, 0, n), slice(x, n, n)) - e0));
        }
        out << fmt::format("initial energy: {:.10g} J\n", e0);
        out << fmt::format("max energy drift: {:.6e} J\n", drift);
        if (e0 != 0.0) out << fmt::format("relative drift: {:.6e}\n", drift / std::abs(e0));
        rep.headline["energy_drift"] = drift;
    }
    return kExitOk;
}

struct ControlOpts {
    std::string model, config, out;
    std::vector<double> num, den;
    double T = 10.0, dt = 1e-3, wn = 3.0, zeta = 0.9;
};

inline int cmd_linearize(const ControlOpts& o, std::ostream& out, Report& rep) {
    const auto model = load_model(o.model, o.config, rep);
    auto [q_eq, lean] = lti::upright_equilibrium(model);
    const auto ss = lti::linearize(model, q_eq, Vec(model.n_inputs()));
    out << "equilibrium q = " << fmt_vec(q_eq) << '\n';
    print_matrix(out, "A", ss.A);
    print_matrix(out, "B", ss.B);
    const auto reduced = lti::subsystem(ss, {lean, model.n_dof + lean}, {lean});
    const auto tf = lti::ss_to_tf(reduced, 0, 0);
    out << "lean transfer function: " << lti::to_string(tf) << '\n';
    print_poles(out, "open-loop poles", ode::eigenvalues(ss.A));
    rep.headline["transfer_function"] = lti::to_string(tf);
    return kExitOk;
}

inline int cmd_step(const ControlOpts& o, std::ostream& out, Report& rep) {
    if (o.num.empty() || o.den.empty()) throw DomainError("control step needs --num and --den");
    const lti::TransferFunction tf(Polynomial(std::vector<double>(o.num)), Polynomial(std::vector<double>(o.den)));
    const auto y = lti::step_response(tf, o.T, o.dt);
    if (!o.out.empty()) save_csv(rep, o.out, y);
    out << "transfer function: " << lti::to_string(tf) << '\n';
    // Stable systems settle on the DC gain; otherwise fall back to the tail average.
    bool stable = true;
    for (const Complex& p : lti::poles(tf)) stable &= p.real() < 0.0;
    const auto m = stable ? lti::response_metrics(y, lti::dc_gain(tf)) : lti::response_metrics(y);
    print_metrics(out, m);
    rep.headline["steady_state"] = m.steady_state;
    rep.headline["overshoot"] = m.overshoot;
    return kExitOk;
}

inline int cmd_pd(const ControlOpts& o, std::ostream& out, Report& rep) {
    const auto model = load_model(o.model, o.config, rep);
    const auto d = lti::design_lean_pd(model, o.wn, o.zeta);
    out << "plant: " << lti::to_string(d.plant) << '\n';
    out << fmt::format("kp = {:.10g}\nkd = {:.10g}\nprecomp = {:.10g}\n", d.gains.kp, d.gains.kd, d.precomp);
    out << "closed loop: " << lti::to_string(d.closed_loop) << '\n';
    const auto ps = lti::poles(d.closed_loop);
    print_poles(out, "closed-loop poles", ps);
    const auto y = lti::step_response(d.closed_loop, o.T, o.dt);
    if (!o.out.empty()) save_csv(rep, o.out, y);
    const auto m = lti::response_metrics(y, lti::dc_gain(d.closed_loop));
    print_metrics(out, m);
    rep.headline["kp"] = d.gains.kp;
    rep.headline["kd"] = d.gains.kd;
    rep.headline["precomp"] = d.precomp;
    return kExitOk;
}

// ---- synthetic IMU data ---------------------------------------------------------

struct SynthOpts {
    std::string profile = "rest", out, truth, meas;
    double alpha = 1.0, amplitude = 1.0, omega = 1.0, noise = 0.0, dt = 0.01, T = 1.0, period = 0.5;
    std::vector<double> bias{0.0}, v0, p0;
};

inline int cmd_synth(const SynthOpts& o, std::uint64_t seed, std::ostream& out, Report& rep) {
    odo::SynthConfig cfg;
    if (o.profile == "rest") cfg.profile = odo::Rest{};
    else if (o.profile == "accel") cfg.profile = odo::ConstantAccel{o.alpha};
    else if (o.profile == "sine") cfg.profile = odo::Sinusoid{o.amplitude, o.omega};
    else throw DomainError("unknown profile '" + o.profile + "'");
    cfg.bias = to_vec(o.bias);
    const std::size_t d = cfg.bias.size();
    cfg.noise_std = o.noise;
    cfg.dt = o.dt;
    cfg.T = o.T;
    cfg.seed = seed;
    cfg.v0 = or_zeros(o.v0, d);
    cfg.p0 = or_zeros(o.p0, d);
    const auto s = odo::synth_imu(cfg);
    save_csv(rep, o.out, s.trace);
    if (!o.truth.empty()) save_csv(rep, o.truth, hstack({&s.truth_v, &s.truth_p}));
    if (!o.meas.empty()) {
        SampledSignal ms(d, odo::axis_names("v", d));
        for (const auto& m : odo::sample_measurements(s.truth_v, o.period)) ms.push_back(m.t, m.v);
        save_csv(rep, o.meas, ms);
    }
    out << fmt::format("wrote {} samples (seed {})\n", s.trace.size(), seed);
    rep.headline["samples"] = s.trace.size();
    return kExitOk;
}

inline void write_report(const std::string& path, const Report& rep, double seconds) {
    nlohmann::ordered_json j;
    j["command"] = rep.command;
    j["seed"] = rep.seed;
    j["inputs"] = rep.inputs;
    j["headline"] = rep.headline;
    j["outputs"] = rep.outputs;
    j["wall_time_s"] = seconds;
    std::ofstream f(path);
    if (!f) throw DomainError("cannot write report '" + path + "'");
    f << j.dump(2) << '\n';
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Numerical calculus and control toolkit", "engcalc"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string report_path;
    std::uint64_t seed = 1;
    app.add_option("--report", report_path, "Write a JSON run report");
    app.add_option("--seed", seed, "Random seed for stochastic commands");

    IntegrateOpts io;
    auto* integ = app.add_subcommand("integrate", "Definite integral of an expression");
    integ->add_option("--expr", io.expr)->required();
    integ->add_option("--var", io.var);
    integ->add_option("--a", io.a)->required();
    integ->add_option("--b", io.b)->required();
    integ->add_option("--n", io.n, "Panels")->check(CLI::PositiveNumber);
    integ->add_option("--m", io.m, "Samples per panel for darboux")->check(CLI::PositiveNumber);
    integ->add_option("--method", io.method)
        ->check(CLI::IsMember({"riemann-left", "riemann-right", "midpoint", "trapezoid", "simpson", "darboux"}));

    DifferentiateOpts dopt;
    auto* differ = app.add_subcommand("differentiate", "Central-difference derivative of an expression");
    differ->add_option("--expr", dopt.expr)->required();
    differ->add_option("--var", dopt.var);
    differ->add_option("--at", dopt.at)->required();
    differ->add_option("--order", dopt.order)->check(CLI::IsMember({1, 2}));
    differ->add_option("--step", dopt.h, "Difference step");

    Project1Opts p1;
    auto* proj1 = app.add_subcommand("project1", "IMU odometry with optional bias correction");
    proj1->add_option("--imu", p1.imu)->required();
    proj1->add_option("--meas", p1.meas);
    proj1->add_option("--l1", p1.l1);
    proj1->add_option("--l2", p1.l2);
    proj1->add_option("--v0", p1.v0)->expected(1, 3);
    proj1->add_option("--p0", p1.p0)->expected(1, 3);
    proj1->add_option("--b0", p1.b0)->expected(1, 3);
    proj1->add_option("--out", p1.out)->required();
    proj1->add_option("--plot", p1.plot);

    OptimizeOpts op;
    auto* optim = app.add_subcommand("optimize", "Trajectory optimization scenarios");
    optim->add_option("--scenario", op.scenario)->required()->check(CLI::IsMember({"freethrow", "gymnast", "diver"}));
    optim->add_option("--config", op.config);
    optim->add_option("--mode", op.mode)->check(CLI::IsMember({"free", "fixed-tf", "fixed-speed"}));
    optim->add_option("--tf", op.tf);
    optim->add_option("--speed", op.speed);
    optim->add_option("--samples", op.samples, "Points in the trajectory CSV");
    optim->add_option("--max-iters", op.max_iters, "Descent iteration budget");
    optim->add_option("--trace", op.trace, "Objective and feasibility history CSV");
    optim->add_option("--out", op.out, "Trajectory CSV");
    optim->add_option("--plot", op.plot);

    SimulateOpts so;
    auto* sim = app.add_subcommand("simulate", "Nonlinear simulation of a model");
    sim->add_option("--model", so.model)->required()->check(CLI::IsMember({"pendulum", "segway", "ballbot"}));
    sim->add_option("--config", so.config);
    sim->add_option("--q0", so.q0)->required()->expected(1, -1);
    sim->add_option("--qd0", so.qd0)->expected(1, -1);
    sim->add_option("--T", so.T)->check(CLI::PositiveNumber);
    sim->add_option("--dt", so.dt)->check(CLI::PositiveNumber);
    sim->add_option("--out", so.out)->required();
    sim->add_option("--plot", so.plot);
    sim->add_option("--controller", so.controller)->check(CLI::IsMember({"pd"}));
    sim->add_option("--kp", so.kp);
    sim->add_option("--kd", so.kd);
    sim->add_option("--precomp", so.precomp);
    sim->add_option("--wn", so.wn);
    sim->add_option("--zeta", so.zeta);
    sim->add_option("--ref", so.reference, "Lean reference, rad");

    ControlOpts co;
    auto* control = app.add_subcommand("control", "Linear analysis and PD design");
    control->require_subcommand(1);
    auto* lin = control->add_subcommand("linearize", "Linearize about the upright equilibrium");
    lin->add_option("--model", co.model)->required()->check(CLI::IsMember({"pendulum", "segway", "ballbot"}));
    lin->add_option("--config", co.config);
    auto* step = control->add_subcommand("step", "Step response of num/den (ascending coefficients)");
    step->add_option("--num", co.num)->required()->expected(1, -1);
    step->add_option("--den", co.den)->required()->expected(1, -1);
    step->add_option("--T", co.T)->check(CLI::PositiveNumber);
    step->add_option("--dt", co.dt)->check(CLI::PositiveNumber);
    step->add_option("--out", co.out);
    auto* pd = control->add_subcommand("pd", "PD pole placement on the lean dynamics");
    pd->add_option("--model", co.model)->required()->check(CLI::IsMember({"pendulum", "segway", "ballbot"}));
    pd->add_option("--config", co.config);
    pd->add_option("--wn", co.wn)->required();
    pd->add_option("--zeta", co.zeta)->required();
    pd->add_option("--T", co.T)->check(CLI::PositiveNumber);
    pd->add_option("--dt", co.dt)->check(CLI::PositiveNumber);
    pd->add_option("--out", co.out);

    SynthOpts sy;
    auto* synth = app.add_subcommand("synth-imu", "Synthetic IMU trace with known truth");
    synth->add_option("--profile", sy.profile)->check(CLI::IsMember({"rest", "accel", "sine"}));
    synth->add_option("--alpha", sy.alpha);
    synth->add_option("--amplitude", sy.amplitude);
    synth->add_option("--omega", sy.omega);
    synth->add_option("--bias", sy.bias)->expected(1, 3);
    synth->add_option("--noise", sy.noise);
    synth->add_option("--dt", sy.dt);
    synth->add_option("--T", sy.T);
    synth->add_option("--v0", sy.v0)->expected(1, 3);
    synth->add_option("--p0", sy.p0)->expected(1, 3);
    synth->add_option("--out", sy.out)->required();
    synth->add_option("--truth", sy.truth);
    synth->add_option("--meas", sy.meas);
    synth->add_option("--period", sy.period);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitInput;
    }

    Report rep;
    rep.command = args;
    rep.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    std::string expr_text;
    try {
        int code = kExitOk;
        if (*integ) {
            expr_text = io.expr;
            code = cmd_integrate(io, out, rep);
        } else if (*differ) {
            expr_text = dopt.expr;
            code = cmd_differentiate(dopt, out, rep);
        } else if (*proj1) {
            code = cmd_project1(p1, out, rep);
        } else if (*optim) {
            code = cmd_optimize(op, out, rep);
        } else if (*sim) {
            code = cmd_simulate(so, out, rep);
        } else if (*lin) {
            code = cmd_linearize(co, out, rep);
        } else if (*step) {
            code = cmd_step(co, out, rep);
        } else if (*pd) {
            code = cmd_pd(co, out, rep);
        } else if (*synth) {
            code = cmd_synth(sy, seed, out, rep);
        }
        if (!report_path.empty()) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            write_report(report_path, rep, elapsed.count());
        }
        return code;
    } catch (const ParseError& e) {
        report_parse_error(err, expr_text, e);
        return kExitInput;
    } catch (const ConvergenceError& e) {
        err << "no convergence: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

} // namespace engcalc::cli
