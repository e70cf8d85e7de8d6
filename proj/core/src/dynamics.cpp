#include "chiralpoint/dynamics.hpp"

#include "chiralpoint/errors.hpp"
#include "chiralpoint/generator.hpp"
#include "chiralpoint/response.hpp"

#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chiralpoint
{

namespace
{

constexpr cdouble I{0.0, 1.0};

void check_time_grid(const std::vector<double>& t)
{
    if (t.empty() || t.front() != 0.0) {
        fail(ErrorCode::ValidationError, "time grid must start at 0");
    }
    if (t.size() < 2) {
        return;
    }
    const double dt = t[1] - t[0];
    if (!(dt > 0.0)) {
        fail(ErrorCode::ValidationError, "time grid must be increasing");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * dt + 1e-12 * std::abs(t[i])) {
            fail(ErrorCode::ValidationError, "time grid must be uniform");
        }
    }
}

// int_0^1 (1-u) e^{ku} du and int_0^1 u e^{ku} du
void filon_weights(cdouble k, cdouble& wa, cdouble& wb)
{
    if (std::abs(k) < 0.05) {
        cdouble kn = 1.0;
        double fact = 1.0;
        wa = 0.0;
        wb = 0.0;
        for (int n = 0; n < 8; ++n) {
            if (n > 0) {
                kn *= k;
                fact *= n;
            }
            wa += kn / (fact * (n + 1) * (n + 2));
            wb += kn / (fact * (n + 2));
        }
        return;
    }
    const cdouble ek = std::exp(k);
    wb = ek / k - (ek - 1.0) / (k * k);
    wa = (ek - 1.0) / k - wb;
}

using State = std::vector<cdouble>;

} // namespace

cdouble emitter_correlation(const SystemParams& p, double omega)
{
    return I / (omega - p.emitter.omega_0 + I * (p.emitter.gamma() / 2.0) - chi_sys(p, omega));
}

double emission_density(const SystemParams& p, double omega)
{
    const cdouble chi = chi_sys(p, omega);
    const double big_gamma = -2.0 * chi.imag();
    const double width = p.emitter.gamma() + big_gamma;
    const double x = omega - p.emitter.omega_0 - chi.real();
    return width / (2.0 * std::numbers::pi * (x * x + 0.25 * width * width));
}

SystemParams emitter_at_ldos_peak(const SystemParams& params, std::size_t points)
{
    SystemParams p = params;
    p.emitter.omega_0 = peak_metrics(spectral_density(p, cavity_window(p, points))).omega_peak;
    return p;
}

std::vector<double> emission_grid(const SystemParams& p, std::size_t points)
{
    const double w0 = p.emitter.omega_0;
    double lo = w0 - 20.0 * p.photon.kappa();
    double hi = w0 + 20.0 * p.photon.kappa();
    std::vector<std::vector<double>> parts;
    const Eigen::VectorXcd lam = eigenvalues(build_generator(p, Basis::Standing4));
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        const double hw = -lam[i].imag();
        if (std::abs(lam[i].real() - w0) > 0.5 || !(hw > 0.0)) {
            continue;
        }
        lo = std::min(lo, lam[i].real() - 20.0 * hw);
        hi = std::max(hi, lam[i].real() + 20.0 * hw);
        parts.push_back(linspace(lam[i].real() - 20.0 * hw, lam[i].real() + 20.0 * hw, 801));
    }
    parts.push_back(linspace(lo, hi, points));
    return merge_grids(parts);
}

EmissionResult emission_spectrum(const SystemParams& p, const std::vector<double>& grid)
{
    require_valid(p);
    std::vector<double> s(grid.size()), lamb(grid.size()), gam(grid.size());
    bool any_width = p.emitter.gamma() > 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cdouble chi = chi_sys(p, grid[i]);
        lamb[i] = chi.real();
        gam[i] = -2.0 * chi.imag();
        const double width = p.emitter.gamma() + gam[i];
        const double x = grid[i] - p.emitter.omega_0 - lamb[i];
        s[i] = width / (2.0 * std::numbers::pi * (x * x + 0.25 * width * width));
        any_width = any_width || gam[i] > 0.0;
    }
    if (!any_width) {
        fail(ErrorCode::ValidationError, "emission spectrum is a delta function (gamma = 0 and Gamma = 0)");
    }
    EmissionResult r;
    r.spectrum = ComplexSpectrum::from_real(grid, s);
    r.lamb_shift = ComplexSpectrum::from_real(grid, lamb);
    r.local_coupling = ComplexSpectrum::from_real(grid, gam);
    return r;
}

double max_ode_step(const SystemParams& p)
{
    Eigen::MatrixXcd m = build_generator(p, Basis::Traveling4).entries;
    m -= p.emitter.omega_0 * Eigen::MatrixXcd::Identity(4, 4);
    return 0.01 / m.norm();
}

std::vector<double> spectral_quadrature_grid(const SystemParams& p, const DynamicsOptions& o)
{
    const Eigen::VectorXcd lam = eigenvalues(build_generator(p, Basis::Standing4));
    double widest = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        widest = std::max(widest, -2.0 * lam[i].imag());
    }
    if (!(widest > 0.0)) {
        fail(ErrorCode::ValidationError, "all modes are undamped; the spectrum has no width");
    }
    const double span = o.spectral_span > 0.0 ? o.spectral_span : 60.0 * widest;
    if (span < 50.0 * widest) {
        fail(ErrorCode::AliasError, "spectral span " + std::to_string(span) + " eV is below 50 x the widest linewidth "
                                        + std::to_string(widest) + " eV");
    }
    const double ppw = std::max(o.points_per_width, 2.0);
    const double lo = p.emitter.omega_0 - span / 2.0;
    const double hi = p.emitter.omega_0 + span / 2.0;
    std::vector<std::vector<double>> parts;
    parts.push_back(linspace(lo, hi, static_cast<std::size_t>(std::ceil(span / widest * ppw)) + 1));
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        const double hw = -lam[i].imag();
        if (!(hw > 0.0)) {
            continue;
        }
        const double a = std::max(lo, lam[i].real() - 40.0 * hw);
        const double b = std::min(hi, lam[i].real() + 40.0 * hw);
        if (b > a) {
            parts.push_back(linspace(a, b, static_cast<std::size_t>(std::ceil((b - a) / hw * ppw)) + 1));
        }
    }
    return merge_grids(parts);
}

std::vector<cdouble> qe_amplitude_spectral(const SystemParams& p, const std::vector<double>& t_grid,
                                           const DynamicsOptions& o)
{
    require_valid(p);
    check_time_grid(t_grid);
    const std::vector<double> w = spectral_quadrature_grid(p, o);
    const double w0 = p.emitter.omega_0;
    std::vector<double> s(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        s[i] = emission_density(p, w[i]);
    }

    std::vector<cdouble> out(t_grid.size());
    for (std::size_t n = 0; n < t_grid.size(); ++n) {
        const double t = t_grid[n];
        cdouble acc = 0.0;
        for (std::size_t i = 1; i < w.size(); ++i) {
            const double h = w[i] - w[i - 1];
            cdouble wa, wb;
            filon_weights(-I * (h * t), wa, wb);
            acc += std::polar(1.0, -(w[i - 1] - w0) * t) * h * (s[i - 1] * wa + s[i] * wb);
        }
        out[n] = std::polar(1.0, -w0 * t) * acc;
    }
    return out;
}

std::vector<double> qe_dynamics(const SystemParams& p, const std::vector<double>& t_grid,
                                DynamicsMethod method, const DynamicsOptions& o)
{
    require_valid(p);
    check_time_grid(t_grid);
    std::vector<double> pop(t_grid.size());

    if (method == DynamicsMethod::SpectralFT) {
        const std::vector<cdouble> c = qe_amplitude_spectral(p, t_grid, o);
        for (std::size_t i = 0; i < c.size(); ++i) {
            pop[i] = std::norm(c[i]);
        }
        return pop;
    }

    const double hmax = max_ode_step(p);
    if (o.ode_step > 0.0 && o.ode_step > hmax * (1.0 + 1e-12)) {
        fail(ErrorCode::StepError, "ODE step " + std::to_string(o.ode_step) + " exceeds 0.01/||M|| = "
                                       + std::to_string(hmax));
    }
    const double h_req = o.ode_step > 0.0 ? o.ode_step : hmax;

    Eigen::Matrix4cd m = build_generator(p, Basis::Traveling4).entries;
    m -= p.emitter.omega_0 * Eigen::Matrix4cd::Identity();
    const Eigen::Matrix4cd a = -I * m;

    auto rhs = [&a](const State& x, State& dxdt, double) {
        for (int r = 0; r < 4; ++r) {
            cdouble v = 0.0;
            for (int c = 0; c < 4; ++c) {
                v += a(r, c) * x[c];
            }
            dxdt[r] = v;
        }
    };

    boost::numeric::odeint::runge_kutta4<State, double, State, double> stepper;
    State x{1.0, 0.0, 0.0, 0.0};
    pop[0] = 1.0;
    double t = 0.0;
    for (std::size_t n = 1; n < t_grid.size(); ++n) {
        const double dt = t_grid[n] - t_grid[n - 1];
        const auto sub = static_cast<std::size_t>(std::ceil(dt / h_req - 1e-9));
        const double h = dt / static_cast<double>(std::max<std::size_t>(sub, 1));
        for (std::size_t k = 0; k < std::max<std::size_t>(sub, 1); ++k) {
            stepper.do_step(rhs, x, t, h);
            t += h;
        }
        t = t_grid[n];
        pop[n] = std::norm(x[0]);
    }
    return pop;
}

} // namespace chiralpoint
