#include "chiralpoint/sweep.hpp"

#include "chiralpoint/errors.hpp"
#include "chiralpoint/response.hpp"
#include "chiralpoint/scatter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace chiralpoint
{

Observable parse_observable(std::string_view s)
{
    if (s == "PurcellMax") return Observable::PurcellMax;
    if (s == "Linewidth") return Observable::Linewidth;
    if (s == "Eta") return Observable::Eta;
    if (s == "Sigma0") return Observable::Sigma0;
    if (s == "EnhancementPair") return Observable::EnhancementPair;
    fail(ErrorCode::SchemaError, "unknown observable '" + std::string(s)
                                     + "' (PurcellMax|Linewidth|Eta|Sigma0|EnhancementPair)");
}

std::string_view to_string(Observable o)
{
    switch (o) {
    case Observable::PurcellMax: return "PurcellMax";
    case Observable::Linewidth: return "Linewidth";
    case Observable::Eta: return "Eta";
    case Observable::Sigma0: return "Sigma0";
    case Observable::EnhancementPair: return "EnhancementPair";
    }
    return "?";
}

std::vector<std::string> observable_columns(Observable o)
{
    switch (o) {
    case Observable::PurcellMax: return {"F_p", "omega_peak_eV", "peak_count"};
    case Observable::Linewidth: return {"fwhm_eV", "omega_peak_eV"};
    case Observable::Eta: return {"eta", "eta0", "eta_r", "eta_d", "deltaL_at_max_eV"};
    case Observable::Sigma0: return {"sigma0", "sigma_sup", "sigma_so"};
    case Observable::EnhancementPair: return {"Fp_ratio", "width_ratio", "phi_over_pi_at_max"};
    }
    return {};
}

std::vector<double> SweepAxis::grid() const
{
    if (!values.empty()) {
        return values;
    }
    return log ? logspace(lo, hi, points) : linspace(lo, hi, points);
}

namespace
{

bool is_phase_path(const std::string& p)
{
    return p == "mirror.phi" || p == "mirror.phi_over_pi";
}

std::string repr(double v)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

const double nan = std::numeric_limits<double>::quiet_NaN();

} // namespace

void validate_spec(const SweepSpec& s)
{
    if (s.axes.empty() || s.axes.size() > 2) {
        fail(ErrorCode::ValidationError, "a sweep needs 1 or 2 axes");
    }
    const auto& paths = parameter_paths();
    for (const auto& a : s.axes) {
        if (std::find(paths.begin(), paths.end(), a.path) == paths.end()) {
            std::string known;
            for (const auto& q : paths) {
                known += (known.empty() ? "" : ", ") + q;
            }
            fail(ErrorCode::SchemaError, "axis '" + a.path + "' is not a parameter path (known: " + known + ")");
        }
        if (a.values.empty() && a.points < 2) {
            fail(ErrorCode::ValidationError, "axis '" + a.path + "' needs at least 2 points");
        }
    }
}

std::string sweep_hash(const SweepSpec& s, const SystemParams& p)
{
    std::ostringstream os;
    for (const auto& path : parameter_paths()) {
        if (path == "photon.kappa_c_over_kappa_i") {
            continue; // derived, may be inf
        }
        os << path << '=' << repr(get_parameter(p, path)) << ';';
    }
    os << "observable=" << to_string(s.observable) << ';';
    for (const auto& a : s.axes) {
        os << "axis=" << a.path << ':';
        for (double v : a.grid()) {
            os << repr(v) << ',';
        }
        os << ';';
    }
    os << "scan=" << repr(s.scan.wide_half_width) << ',' << s.scan.wide_points << ','
       << repr(s.scan.fine_half_width_kappa) << ',' << s.scan.fine_points << ',' << s.scan.refine << ';';
    os << "budget=" << s.budget.include_gamma_nr << s.budget.include_kappa_i << ';';
    os << "phi_points=" << s.phi_points << ";points=" << s.points << ";version=" << version();
    return hex64(fnv1a(os.str()));
}

std::vector<double> evaluate_observable(const SweepSpec& s, const SystemParams& p, std::string* label)
{
    switch (s.observable) {
    case Observable::PurcellMax: {
        const PeakMetrics m = peak_metrics(purcell_spectrum(p, cavity_window(p, s.points)));
        return {m.f_p, m.omega_peak, static_cast<double>(m.peak_count)};
    }
    case Observable::Linewidth: {
        const PeakMetrics m = peak_metrics(purcell_spectrum(p, cavity_window(p, s.points)));
        return {m.fwhm, m.omega_peak};
    }
    case Observable::Eta: {
        const YieldCell c = yield_cell(p, s.scan, s.budget);
        return {c.eta, c.eta0, c.eta_r, c.eta_d, c.delta_at_max};
    }
    case Observable::Sigma0: {
        const ScatterDecomposition d = decompose_sigma0(p);
        if (label) {
            *label = std::string(to_string(d.mechanism));
        }
        return {d.sigma_total, d.sigma_sup, d.sigma_so};
    }
    case Observable::EnhancementPair: {
        const bool fixed_phase = std::any_of(s.axes.begin(), s.axes.end(),
                                             [](const SweepAxis& a) { return is_phase_path(a.path); });
        SystemParams q = p;
        q.mirror.present = true;
        const EnhancementCell c = fixed_phase ? enhancement_at(q, s.points) : optimize_phase(q, s.phi_points);
        return {c.ratio_fp(), c.ratio_width(), c.phi / std::numbers::pi};
    }
    }
    return {};
}

Table run_sweep(const SweepSpec& s, const SystemParams& p, const SweepOptions& o)
{
    validate_spec(s);
    require_valid(p);

    std::vector<std::vector<double>> grids;
    for (const auto& a : s.axes) {
        grids.push_back(a.grid());
    }
    const std::size_t inner = grids.size() == 2 ? grids[1].size() : 1;
    const std::size_t n = grids[0].size() * inner;
    const std::vector<std::string> obs_cols = observable_columns(s.observable);

    Table t;
    for (const auto& a : s.axes) {
        t.columns.push_back(a.path);
    }
    t.columns.insert(t.columns.end(), obs_cols.begin(), obs_cols.end());
    if (s.observable == Observable::Sigma0) {
        t.label_column = "mechanism";
    }
    t.has_status = true;

    std::vector<std::vector<double>> values(n);
    std::vector<std::string> labels(n), status(n);
    std::vector<char> done(n, 0);

    const std::string hash = sweep_hash(s, p);
    if (!o.checkpoint.empty()) {
        std::ifstream in(o.checkpoint);
        std::string line;
        if (in && std::getline(in, line) && line == "# sweep " + hash) {
            while (std::getline(in, line)) {
                std::istringstream ls(line);
                std::string tok;
                std::vector<std::string> f;
                while (std::getline(ls, tok, ',')) {
                    f.push_back(tok);
                }
                if (f.size() != obs_cols.size() + 3) {
                    continue; // partial line from an interrupted run
                }
                const std::size_t i = std::stoul(f[0]);
                if (i >= n) {
                    continue;
                }
                values[i].clear();
                for (std::size_t k = 0; k < obs_cols.size(); ++k) {
                    values[i].push_back(std::stod(f[1 + k]));
                }
                labels[i] = f[obs_cols.size() + 1];
                status[i] = f[obs_cols.size() + 2];
                done[i] = 1;
            }
        }
    }

    std::ofstream ck;
    std::mutex ck_mutex;
    if (!o.checkpoint.empty()) {
        const bool resume = std::any_of(done.begin(), done.end(), [](char c) { return c != 0; });
        ck.open(o.checkpoint, resume ? std::ios::app : std::ios::trunc);
        if (!ck) {
            fail(ErrorCode::IoError, "cannot open checkpoint '" + o.checkpoint + "'");
        }
        if (!resume) {
            ck << "# sweep " << hash << '\n';
            ck.flush();
        }
    }

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            if (done[i]) {
                continue;
            }
            SystemParams q = p;
            std::string label;
            try {
                set_parameter(q, s.axes[0].path, grids[0][i / inner]);
                if (grids.size() == 2) {
                    set_parameter(q, s.axes[1].path, grids[1][i % inner]);
                }
                require_valid(q);
                values[i] = evaluate_observable(s, q, &label);
                status[i] = "ok";
            }
            catch (const Error& e) {
                values[i].assign(obs_cols.size(), nan);
                status[i] = std::string(to_string(e.code()));
            }
            labels[i] = label;
            if (ck.is_open()) {
                std::lock_guard<std::mutex> lock(ck_mutex);
                ck << i;
                for (double v : values[i]) {
                    ck << ',' << format_number(v);
                }
                ck << ',' << labels[i] << ',' << status[i] << '\n';
                ck.flush();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (auto& th : pool) {
        th.join();
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row{grids[0][i / inner]};
        if (grids.size() == 2) {
            row.push_back(grids[1][i % inner]);
        }
        row.insert(row.end(), values[i].begin(), values[i].end());
        t.add_row(std::move(row), labels[i], status[i]);
    }
    return t;
}

} // namespace chiralpoint
