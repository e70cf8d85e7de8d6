#include "chiralpoint/yield.hpp"

#include "chiralpoint/errors.hpp"
#include "chiralpoint/generator.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace chiralpoint
{

Eigen::Vector4cd SteadyState::per_unit() const
{
    if (drive_amplitude == 0.0) {
        return Eigen::Vector4cd::Zero();
    }
    return amplitudes / drive_amplitude;
}

SteadyState steady_state(const SystemParams& p, const Drive& d)
{
    const ValidationReport report = validate(d);
    if (!report.ok()) {
        fail(ErrorCode::ValidationError, report.summary());
    }
    const Eigen::Matrix4cd m = build_generator(p, Basis::Traveling4, d.omega_L).entries;
    Eigen::PartialPivLU<Eigen::Matrix4cd> lu(m);
    if (!(lu.rcond() > 1e-14)) {
        fail(ErrorCode::SingularAtDetuning, "generator is singular at omega_L = " + std::to_string(d.omega_L));
    }
    Eigen::Vector4cd omega = Eigen::Vector4cd::Zero();
    omega[d.target == DriveTarget::Emitter ? 0 : 1] = d.amplitude;
    SteadyState s;
    s.amplitudes = -lu.solve(omega);
    s.drive_amplitude = d.amplitude;
    s.detuning = p.photon.omega_c - d.omega_L;
    s.target = d.target;
    return s;
}

PowerBudget power_budget(const SteadyState& s, const SystemParams& p, const BudgetOptions& o)
{
    const cdouble sm = s.amplitudes[0];
    const cdouble a = s.amplitudes[1];
    const double cav = std::norm(s.amplitudes[2]) + std::norm(s.amplitudes[3]);
    PowerBudget b;
    b.phi_r = std::norm(std::sqrt(p.plasmon.kappa_r) * a + std::sqrt(p.emitter.gamma_0) * sm) + p.photon.kappa_c * cav;
    b.phi_d = p.plasmon.kappa_o * std::norm(a) + p.emitter.gamma_m * std::norm(sm);
    if (o.include_gamma_nr) {
        b.phi_d += p.emitter.gamma_nr * std::norm(sm);
    }
    if (o.include_kappa_i) {
        b.phi_d += p.photon.kappa_i * cav;
    }
    const double tot = b.phi_r + b.phi_d;
    b.eta = tot > 0.0 ? b.phi_r / tot : 0.0;
    return b;
}

namespace
{

PowerBudget budget_at(const SystemParams& p, double delta, const BudgetOptions& o)
{
    Drive d;
    d.omega_L = p.photon.omega_c - delta;
    return power_budget(steady_state(p, d), p, o);
}

double fine_step(const SystemParams& p, const DetuningScan& s)
{
    return 2.0 * s.fine_half_width_kappa * p.photon.kappa() / static_cast<double>(s.fine_points - 1);
}

} // namespace

std::vector<double> detuning_grid(const SystemParams& p, const DetuningScan& s)
{
    const double k = p.photon.kappa();
    return merge_grids({linspace(-s.wide_half_width, s.wide_half_width, s.wide_points),
                        linspace(-s.fine_half_width_kappa * k, s.fine_half_width_kappa * k, s.fine_points)});
}

ComplexSpectrum yield_spectrum(const SystemParams& p, const std::vector<double>& detunings, const BudgetOptions& o)
{
    require_valid(p);
    std::vector<double> eta(detunings.size());
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        eta[i] = budget_at(p, detunings[i], o).eta;
    }
    return ComplexSpectrum::from_real(detunings, eta);
}

ScanSummary scan_yield(const SystemParams& p, const DetuningScan& s, const BudgetOptions& o)
{
    require_valid(p);
    if (s.fine_points < 2 || s.wide_points < 2) {
        fail(ErrorCode::ValidationError, "detuning scan needs at least 2 points per range");
    }
    ScanSummary r;
    r.fine_step = fine_step(p, s);
    if (r.fine_step > p.photon.kappa() / 20.0 * (1.0 + 1e-12)) {
        fail(ErrorCode::ValidationError, "detuning step exceeds kappa/20");
    }
    const std::vector<double> grid = detuning_grid(p, s);
    // power extrema are taken over the cavity window only; far off resonance
    // both systems share the same plasmon tail
    const double fine_edge = s.fine_half_width_kappa * p.photon.kappa() * (1.0 + 1e-12);
    std::size_t best = 0;
    r.eta_max = -1.0;
    r.phi_d_min = INFINITY;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const PowerBudget b = budget_at(p, grid[i], o);
        if (b.eta > r.eta_max) {
            r.eta_max = b.eta;
            r.delta_at_max = grid[i];
            r.budget_at_max = b;
            best = i;
        }
        if (std::abs(grid[i]) > fine_edge) {
            continue;
        }
        r.phi_r_max = std::max(r.phi_r_max, b.phi_r);
        if (b.phi_d < r.phi_d_min) {
            r.phi_d_min = b.phi_d;
            r.delta_at_phi_d_min = grid[i];
        }
    }
    if (s.refine && best > 0 && best + 1 < grid.size()) {
        auto neg = [&](double d) { return -budget_at(p, d, o).eta; };
        const auto [d, v] = boost::math::tools::brent_find_minima(neg, grid[best - 1], grid[best + 1], 50);
        if (-v > r.eta_max) {
            r.eta_max = -v;
            r.delta_at_max = d;
            r.budget_at_max = budget_at(p, d, o);
        }
    }
    return r;
}

YieldCell yield_cell(const SystemParams& p, const DetuningScan& s, const BudgetOptions& o)
{
    const SystemParams base = p.without_mirror();
    const ScanSummary m = scan_yield(p, s, o);
    const ScanSummary b = p.mirror.present ? scan_yield(base, s, o) : m;
    YieldCell c;
    c.q_c = p.photon.quality();
    c.phi = p.mirror.phi;
    c.eta = m.eta_max;
    c.eta0 = b.eta_max;
    c.eta_r = m.phi_r_max / b.phi_r_max;
    c.eta_d = b.phi_d_min / m.phi_d_min;
    c.delta_at_max = m.delta_at_max;
    c.delta_at_phi_d_min = m.delta_at_phi_d_min;
    c.fine_step = m.fine_step;
    c.phi_r_gain_at_max = m.budget_at_max.phi_r / budget_at(base, m.delta_at_max, o).phi_r;
    return c;
}

std::vector<YieldCell> yield_map(const SystemParams& p, const std::vector<double>& qc_grid,
                                 const std::vector<double>& phi_grid, const DetuningScan& s,
                                 const BudgetOptions& o, unsigned jobs)
{
    const std::size_t n = qc_grid.size() * phi_grid.size();
    std::vector<YieldCell> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                SystemParams q = p.with_photonic_quality(qc_grid[i / phi_grid.size()]);
                q = q.with_phase(phi_grid[i % phi_grid.size()]);
                out[i] = yield_cell(q, s, o);
            }
            catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

} // namespace chiralpoint
