#include "chiralpoint/chiralpoint.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace chiralpoint;

namespace
{

struct Options
{
    std::string command;
    std::string config;
    std::string preset;
    std::string out = "-";
    std::string format = "csv";
    unsigned jobs = 1;
    bool baseline = false;
    std::string checkpoint;
};

std::string num(double v)
{
    return format_number(v);
}

std::vector<double> omega_grid(const LoadedConfig& c, const SystemParams& p)
{
    if (c.run.omega_min || c.run.omega_max) {
        if (!c.run.omega_min || !c.run.omega_max || !(*c.run.omega_max > *c.run.omega_min)) {
            fail(ErrorCode::ValidationError, "run.omega_min < run.omega_max must both be given");
        }
        return linspace(*c.run.omega_min, *c.run.omega_max, c.run.points);
    }
    return default_grid(p, c.run.points);
}

// tune the emitter onto the Purcell maximum of the mirrored system
SystemParams prepare(const LoadedConfig& c)
{
    SystemParams p = c.params;
    if (c.run.emitter_at_ldos_peak) {
        p = emitter_at_ldos_peak(p, c.run.points);
    }
    return p;
}

Table cmd_ldos(const LoadedConfig& c, const Options& o)
{
    SystemParams p = c.params;
    if (o.baseline) {
        p = p.without_mirror();
    }
    const SystemParams b = p.without_mirror();
    const std::vector<double> grid = omega_grid(c, p);
    const auto j = spectral_density(p, grid).real();
    const auto pf = purcell_spectrum(p, grid).real();
    const auto j0 = spectral_density(b, grid).real();
    const auto p0 = purcell_spectrum(b, grid).real();
    Table t;
    t.columns = {"omega_eV", "J_eV", "P", "J_baseline_eV", "P_baseline"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        t.add_row({grid[i], j[i], pf[i], j0[i], p0[i]});
    }
    const EnhancementCell e = enhancement_at(p, c.run.points);
    t.summary = {{"F_p", num(e.peak.f_p)},
                 {"omega_peak_eV", num(e.peak.omega_peak)},
                 {"fwhm_eV", num(e.peak.fwhm)},
                 {"peak_count", std::to_string(e.peak.peak_count)},
                 {"F_p_baseline", num(e.baseline.f_p)},
                 {"fwhm_baseline_eV", num(e.baseline.fwhm)},
                 {"Fp_ratio", num(e.ratio_fp())},
                 {"width_ratio", num(e.ratio_width())}};
    return t;
}

std::vector<double> emission_grid(const LoadedConfig& c, const SystemParams& p)
{
    if (c.run.omega_min || c.run.omega_max) {
        return omega_grid(c, p);
    }
    return emission_grid(p, c.run.points);
}

Table cmd_emission(const LoadedConfig& c, const Options& o)
{
    SystemParams p = prepare(c);
    if (o.baseline) {
        p = p.without_mirror();
    }
    const std::vector<double> grid = emission_grid(c, p);
    const EmissionResult r = emission_spectrum(p, grid);
    const auto s = r.spectrum.real();
    const auto g = r.local_coupling.real();
    const auto d = r.lamb_shift.real();
    Table t;
    t.columns = {"omega_eV", "S_per_eV", "Gamma_eV", "Delta_eV"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        t.add_row({grid[i] + c.run.emission_shift, s[i], g[i], d[i]});
    }
    const PeakMetrics m = peak_metrics(grid, s);
    t.summary = {{"omega_0_eV", num(p.emitter.omega_0)},
                 {"peak_count", std::to_string(m.peak_count)},
                 {"omega_peak_eV", num(m.omega_peak + c.run.emission_shift)},
                 {"area", num(trapezoid(grid, s))},
                 {"shift_eV", num(c.run.emission_shift)}};
    return t;
}

Table cmd_dynamics(const LoadedConfig& c, const Options& o)
{
    SystemParams p = prepare(c);
    if (o.baseline) {
        p = p.without_mirror();
    }
    const std::vector<double> t_fs = linspace(0.0, c.run.t_max_fs, c.run.t_points);
    std::vector<double> t(t_fs.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = units::fs_to_internal_time(t_fs[i]);
    }
    t[0] = 0.0;
    DynamicsOptions d;
    d.ode_step = c.run.dynamics_step;
    d.spectral_span = c.run.spectral_span;
    const DynamicsMethod m = c.run.dynamics_method == "ode" ? DynamicsMethod::DirectODE : DynamicsMethod::SpectralFT;
    const auto pop = qe_dynamics(p, t, m, d);
    const auto pop0 = qe_dynamics(p.without_mirror(), t, m, d);
    Table tab;
    tab.columns = {"t_fs", "population", "population_baseline"};
    for (std::size_t i = 0; i < t.size(); ++i) {
        tab.add_row({t_fs[i], pop[i], pop0[i]});
    }
    tab.summary = {{"method", c.run.dynamics_method}, {"omega_0_eV", num(p.emitter.omega_0)}};
    return tab;
}

Table cmd_yield(const LoadedConfig& c, const Options& o)
{
    SystemParams p = c.params;
    if (o.baseline) {
        p = p.without_mirror();
    }
    std::vector<double> qc = c.run.q_c_values;
    if (qc.empty()) {
        qc.push_back(p.photon.quality());
    }
    std::vector<double> phi;
    for (double x : c.run.phi_over_pi_values) {
        phi.push_back(x * std::numbers::pi);
    }
    if (phi.empty()) {
        phi.push_back(p.mirror.phi);
    }
    const auto cells = yield_map(p, qc, phi, c.run.scan, c.run.budget, o.jobs);
    Table t;
    t.columns = {"Qc", "phi_over_pi", "eta", "eta0", "eta_r", "eta_d", "deltaL_at_max_eV", "PhiR_gain_at_max"};
    double best = -1.0, best0 = -1.0;
    for (const auto& y : cells) {
        t.add_row({y.q_c, y.phi / std::numbers::pi, y.eta, y.eta0, y.eta_r, y.eta_d, y.delta_at_max,
                   y.phi_r_gain_at_max});
        best = std::max(best, y.eta);
        best0 = std::max(best0, y.eta0);
    }
    t.summary = {{"eta_max", num(best)},
                 {"eta0_max", num(best0)},
                 {"include_gamma_nr", c.run.budget.include_gamma_nr ? "true" : "false"},
                 {"include_kappa_i", c.run.budget.include_kappa_i ? "true" : "false"}};
    return t;
}

Table cmd_scatter(const LoadedConfig& c, const Options& o)
{
    SystemParams p = c.params;
    if (o.baseline) {
        p = p.without_mirror();
    }
    const double half = c.run.deltaL_half_width.value_or(20.0 * p.photon.kappa());
    const std::vector<double> grid = linspace(-half, half, c.run.points);
    const ScatterRoute route = c.run.scatter_route == "direct" ? ScatterRoute::Direct : ScatterRoute::Eigen;
    const auto s = scatter_spectrum(p, grid, route).real();
    const auto s0 = scatter_spectrum(p.without_mirror(), grid, ScatterRoute::Direct).real();
    Table t;
    t.columns = {"deltaL_eV", "sigma", "sigma_baseline"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        t.add_row({grid[i], s[i], s0[i]});
    }
    const ScatterDecomposition d = decompose_sigma0(p);

    // where the scattering peak and the emitter-driven radiated power peak sit
    const std::size_t ks = static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
    std::size_t kr = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Drive drive;
        drive.omega_L = p.photon.omega_c - grid[i];
        drive.target = DriveTarget::Plasmon;
        const double pr = power_budget(steady_state(p, drive), p, c.run.budget).phi_r;
        if (pr > best) {
            best = pr;
            kr = i;
        }
    }
    const bool together = (ks > kr ? ks - kr : kr - ks) <= 1;
    t.summary = {{"sigma0", num(d.sigma_total)},
                 {"sigma_sup", num(d.sigma_sup)},
                 {"sigma_so", num(d.sigma_so)},
                 {"mechanism", std::string(to_string(d.mechanism))},
                 {"deltaL_sigma_max_eV", num(grid[ks])},
                 {"deltaL_PhiR_max_eV", num(grid[kr])},
                 {"colocated", together ? "true" : "false"}};
    return t;
}

Table cmd_sweep(const LoadedConfig& c, const Options& o)
{
    if (!c.run.sweep) {
        fail(ErrorCode::SchemaError, "config has no run.sweep section");
    }
    SweepOptions so;
    so.jobs = o.jobs;
    so.checkpoint = o.checkpoint;
    SystemParams p = c.params;
    if (o.baseline) {
        p = p.without_mirror();
    }
    Table t = run_sweep(*c.run.sweep, p, so);
    t.summary = {{"observable", std::string(to_string(c.run.sweep->observable))},
                 {"sweep_hash", sweep_hash(*c.run.sweep, p)}};
    return t;
}

ComplexSpectrum read_data(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::IoError, "cannot read fit data '" + path + "'");
    }
    std::vector<double> x, y;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) {
            continue;
        }
        try {
            std::size_t ia = 0, ib = 0;
            const double va = std::stod(a, &ia);
            const double vb = std::stod(b, &ib);
            x.push_back(va);
            y.push_back(vb);
        }
        catch (const std::exception&) {
            if (!x.empty()) {
                fail(ErrorCode::ParseError, path + ": non-numeric row '" + line + "'");
            }
            // header row
        }
    }
    return ComplexSpectrum::from_real(x, y);
}

Table cmd_fit(const LoadedConfig& c, const Options&)
{
    if (!c.run.fit) {
        fail(ErrorCode::SchemaError, "config has no run.fit section");
    }
    const FitSpec& f = *c.run.fit;
    FitProblem prob;
    prob.fixed = c.params;
    prob.quantity = f.quantity;
    prob.free = f.free;
    std::string origin;
    if (f.synthetic_g1) {
        SystemParams truth = c.params;
        truth.couplings.g1 = *f.synthetic_g1;
        prob.data = synthetic_data(truth, f.quantity, cavity_window(truth, f.synthetic_points), f.synthetic_noise,
                                   f.synthetic_seed);
        origin = "synthetic";
    }
    else {
        std::filesystem::path dp(f.data_path);
        if (dp.is_relative() && !c.base_dir.empty()) {
            dp = std::filesystem::path(c.base_dir) / dp;
        }
        prob.data = read_data(dp.string());
        origin = dp.string();
    }
    const FitResult r = fit_g1(prob, f.options);
    Table t;
    t.columns = {"estimate", "sigma"};
    t.label_column = "parameter";
    for (std::size_t i = 0; i < r.free.size(); ++i) {
        t.add_row({r.estimates[i], r.sigma[i]}, std::string(to_string(r.free[i])));
    }
    t.summary = {{"data", origin},
                 {"points", std::to_string(prob.data.size())},
                 {"residual_norm", num(r.residual_norm)},
                 {"condition", num(r.condition)},
                 {"evaluations", std::to_string(r.evaluations)},
                 {"starts_converged", std::to_string(r.starts_converged)}};
    return t;
}

int run(const Options& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    const LoadedConfig c = load_with_preset(o.preset, o.config);
    const Format fmt = parse_format(o.format);
    Table t;
    if (o.command == "ldos") t = cmd_ldos(c, o);
    else if (o.command == "emission") t = cmd_emission(c, o);
    else if (o.command == "dynamics") t = cmd_dynamics(c, o);
    else if (o.command == "yield") t = cmd_yield(c, o);
    else if (o.command == "scatter") t = cmd_scatter(c, o);
    else if (o.command == "sweep") t = cmd_sweep(c, o);
    else if (o.command == "fit") t = cmd_fit(c, o);
    else fail(ErrorCode::ValidationError, "unknown command '" + o.command + "'");

    Provenance prov;
    prov.command = o.command + (o.baseline ? " --baseline" : "");
    prov.config_hash = c.hash();
    prov.config_json = c.canonical;
    prov.notes.emplace_back("source", c.source);
    if (!c.description.empty() && fmt == Format::Csv) {
        prov.notes.emplace_back("description", c.description);
    }
    prov.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    export_table(t, fmt, o.out, prov);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"chiralpoint: few-mode model of a plasmonic-photonic cavity with a chiral exceptional point"};
    app.require_subcommand(0, 1);
    Options o;
    bool list = false;
    app.add_flag("--list-presets", list, "Print the shipped preset names");

    const std::pair<const char*, const char*> subcommands[] = {
        {"ldos", "Spectral density and Purcell factor at the configured phase, with the mirror-free reference"},
        {"emission", "Emitter emission spectrum"},
        {"dynamics", "Excited-state population after full initial excitation"},
        {"yield", "Quantum yield summary for each (Q_c, phase) cell"},
        {"scatter", "Scattering spectrum and its decomposition at zero detuning"},
        {"sweep", "Parameter sweep from run.sweep"},
        {"fit", "Fit couplings to a measured or synthetic spectrum"},
    };
    for (const auto& [name, help] : subcommands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "JSON config file (overlays --preset when both are given)");
        sub->add_option("--preset", o.preset, "Shipped preset name, e.g. fig2");
        sub->add_option("--out", o.out, "Output path, '-' for stdout");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--jobs", o.jobs, "Worker threads for maps and sweeps")->check(CLI::Range(1u, 1024u));
        sub->add_flag("--baseline", o.baseline, "Evaluate the mirror-free system");
        if (std::string(name) == "sweep") {
            sub->add_option("--checkpoint", o.checkpoint, "Resumable checkpoint file");
        }
        sub->callback([&o, name]() { o.command = name; });
    }

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list) {
        for (const auto& p : list_presets()) {
            std::cout << p << '\n';
        }
        return 0;
    }
    if (o.command.empty()) {
        std::cerr << app.help();
        return 2;
    }
    try {
        return run(o);
    }
    catch (const Error& e) {
        std::cerr << "chiralpoint: " << e.what() << '\n';
        return is_validation_code(e.code()) || e.code() == ErrorCode::IoError ? 2 : 3;
    }
    catch (const std::exception& e) {
        std::cerr << "chiralpoint: " << e.what() << '\n';
        return 3;
    }
}
