#include "chiralpoint/response.hpp"

#include "chiralpoint/errors.hpp"
#include "chiralpoint/units.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chiralpoint
{

namespace
{

constexpr cdouble I{0.0, 1.0};

cdouble mirror_factor(const SystemParams& p)
{
    return p.mirror.present ? std::polar(1.0, p.mirror.phi) : cdouble{0.0, 0.0};
}

// prominence of the local maximum at i
double prominence(const std::vector<double>& v, std::size_t i)
{
    double left_min = v[i];
    std::size_t j = i;
    while (j > 0) {
        --j;
        if (v[j] > v[i]) {
            break;
        }
        left_min = std::min(left_min, v[j]);
    }
    double right_min = v[i];
    j = i;
    while (j + 1 < v.size()) {
        ++j;
        if (v[j] > v[i]) {
            break;
        }
        right_min = std::min(right_min, v[j]);
    }
    return v[i] - std::max(left_min, right_min);
}

double half_crossing(double x0, double y0, double x1, double y1, double h)
{
    return x0 + (h - y0) * (x1 - x0) / (y1 - y0);
}

} // namespace

Susceptibilities bare_susceptibilities(const SystemParams& p, double omega)
{
    Susceptibilities s;
    s.chi_a = 1.0 / (omega - p.plasmon.omega_a + I * (p.plasmon.kappa_a() / 2.0));
    s.chi_c = 1.0 / (omega - p.photon.omega_c + I * (p.photon.kappa() / 2.0));
    s.chi_ep = 2.0 * s.chi_c - I * p.photon.kappa_c * mirror_factor(p) * s.chi_c * s.chi_c;
    return s;
}

SpectralComponents spectral_components(const SystemParams& p, double omega)
{
    const Susceptibilities s = bare_susceptibilities(p, omega);
    const double g1 = p.couplings.g1;
    const double ga = p.couplings.ga;
    const double gc = p.couplings.gc;
    const cdouble d = 1.0 - g1 * g1 * s.chi_a * s.chi_ep;
    SpectralComponents c;
    c.j_a = -std::imag(ga * ga * s.chi_a / d);
    c.j_c = -std::imag(gc * gc * s.chi_ep / d);
    c.j_ac = -std::imag(2.0 * ga * g1 * gc * s.chi_a * s.chi_ep / d);
    return c;
}

double spectral_density_at(const SystemParams& p, double omega)
{
    return spectral_components(p, omega).total();
}

double spectral_density_plasmon_only(const SystemParams& p, double omega)
{
    const Susceptibilities s = bare_susceptibilities(p, omega);
    const double g1 = p.couplings.g1;
    const double ga = p.couplings.ga;
    return -std::imag(ga * ga * s.chi_a / (1.0 - g1 * g1 * s.chi_a * s.chi_ep));
}

ComplexSpectrum spectral_density(const SystemParams& p, const std::vector<double>& grid)
{
    require_valid(p);
    std::vector<double> j(grid.size());
    double jmax = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        j[i] = spectral_density_at(p, grid[i]);
        jmax = std::max(jmax, j[i]);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (j[i] < -1e-10 * jmax) {
            fail(ErrorCode::NonPositiveLDOS, "J(" + std::to_string(grid[i]) + " eV) = " + std::to_string(j[i]));
        }
    }
    return ComplexSpectrum::from_real(grid, j);
}

double free_space_density(double omega, double mu_debye)
{
    using namespace units;
    const double w = unit_convert(omega, Unit::ElectronVolt, Unit::RadPerSecond);
    const double mu = unit_convert(mu_debye, Unit::Debye, Unit::CoulombMeter);
    const double rate = w * w * w * mu * mu
        / (6.0 * std::numbers::pi * std::numbers::pi * hbar_si * vacuum_permittivity
           * speed_of_light * speed_of_light * speed_of_light);
    return unit_convert(rate, Unit::RadPerSecond, Unit::ElectronVolt);
}

ComplexSpectrum purcell_spectrum(const SystemParams& p, const std::vector<double>& grid)
{
    if (!(p.emitter.mu_debye > 0.0)) {
        fail(ErrorCode::MissingDipoleMoment, "emitter.mu_debye must be positive for Purcell normalisation");
    }
    ComplexSpectrum j = spectral_density(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) {
            fail(ErrorCode::ValidationError, "Purcell factor needs positive frequencies");
        }
        j.values[i] /= free_space_density(grid[i], p.emitter.mu_debye);
    }
    return j;
}

PeakMetrics peak_metrics(const ComplexSpectrum& spectrum)
{
    spectrum.check();
    return peak_metrics(spectrum.grid, spectrum.real());
}

PeakMetrics peak_metrics(const std::vector<double>& x, const std::vector<double>& v)
{
    const std::size_t n = v.size();
    if (n < 3 || x.size() != n) {
        fail(ErrorCode::NoPeak, "need at least 3 samples");
    }
    const std::size_t k = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    if (k == 0 || k == n - 1) {
        fail(ErrorCode::NoPeak, "maximum lies on the grid boundary");
    }

    PeakMetrics m;
    // parabola through (k-1, k, k+1) on a possibly nonuniform grid
    {
        const double x0 = x[k - 1], x1 = x[k], x2 = x[k + 1];
        const double y0 = v[k - 1], y1 = v[k], y2 = v[k + 1];
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double a = (d12 - d01) / (x2 - x0);
        if (a < 0.0) {
            const double b = d01 - a * (x0 + x1);
            const double xv = std::clamp(-b / (2.0 * a), x0, x2);
            m.omega_peak = xv;
            m.f_p = y1 + (xv - x1) * (d01 + a * (xv - x0));
            m.f_p = std::max(m.f_p, y1);
        }
        else {
            m.omega_peak = x1;
            m.f_p = y1;
        }
    }

    const double h = 0.5 * m.f_p;
    std::size_t l = k;
    while (l > 0 && v[l] > h) {
        --l;
    }
    std::size_t r = k;
    while (r + 1 < n && v[r] > h) {
        ++r;
    }
    if (v[l] > h || v[r] > h) {
        fail(ErrorCode::UnresolvedWidth, "half maximum not bracketed by the grid");
    }
    const double xl = half_crossing(x[l], v[l], x[l + 1], v[l + 1], h);
    const double xr = half_crossing(x[r - 1], v[r - 1], x[r], v[r], h);
    m.fwhm = xr - xl;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (v[i] > v[i - 1] && v[i] >= v[i + 1] && prominence(v, i) >= 0.05 * v[k]) {
            ++m.peak_count;
        }
    }
    return m;
}

std::vector<double> cavity_window(const SystemParams& p, std::size_t points, double half_width_kappa)
{
    // centre on the plasmon-dressed cavity line, width from the dressed linewidth
    const double g1 = p.couplings.g1;
    const cdouble chi_a = 1.0 / (p.photon.omega_c - p.plasmon.omega_a + I * (p.plasmon.kappa_a() / 2.0));
    const cdouble self = 2.0 * g1 * g1 * chi_a;
    const double centre = p.photon.omega_c + self.real();
    const double kappa = p.photon.kappa() - 2.0 * self.imag();
    return linspace(centre - half_width_kappa * kappa, centre + half_width_kappa * kappa, points);
}

std::vector<double> default_grid(const SystemParams& p, std::size_t points)
{
    const double wa = p.plasmon.omega_a;
    const double ka = p.plasmon.kappa_a();
    std::vector<double> plasmon = linspace(std::max(wa - 3.0 * ka, 1e-6), wa + 3.0 * ka, 1001);
    return merge_grids({cavity_window(p, points), plasmon});
}

EnhancementCell enhancement_at(const SystemParams& p, std::size_t points)
{
    EnhancementCell c;
    c.q_c = p.photon.quality();
    c.g1 = p.couplings.g1;
    c.phi = p.mirror.phi;
    const std::vector<double> grid = cavity_window(p, points);
    c.peak = peak_metrics(purcell_spectrum(p, grid));
    c.baseline = peak_metrics(purcell_spectrum(p.without_mirror(), grid));
    return c;
}

std::vector<EnhancementCell> phase_scan(const SystemParams& p, std::size_t n_phi)
{
    std::vector<EnhancementCell> out;
    out.reserve(n_phi);
    SystemParams q = p;
    q.mirror.present = true;
    const std::vector<double> grid = cavity_window(q);
    const PeakMetrics base = peak_metrics(purcell_spectrum(q.without_mirror(), grid));
    for (std::size_t k = 0; k < n_phi; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_phi);
        SystemParams r = q.with_phase(phi);
        EnhancementCell c;
        c.q_c = r.photon.quality();
        c.g1 = r.couplings.g1;
        c.phi = r.mirror.phi;
        c.peak = peak_metrics(purcell_spectrum(r, grid));
        c.baseline = base;
        out.push_back(c);
    }
    return out;
}

EnhancementCell optimize_phase(const SystemParams& p, std::size_t n_phi)
{
    const std::vector<EnhancementCell> scan = phase_scan(p, n_phi);
    const auto best = std::max_element(scan.begin(), scan.end(), [](const auto& a, const auto& b) {
        return a.ratio_fp() < b.ratio_fp();
    });
    SystemParams q = p;
    q.mirror.present = true;
    const std::vector<double> grid = cavity_window(q);
    const PeakMetrics base = best->baseline;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n_phi);
    auto neg_ratio = [&](double phi) {
        try {
            return -peak_metrics(purcell_spectrum(q.with_phase(phi), grid)).f_p;
        }
        catch (const Error&) {
            return 0.0;
        }
    };
    const auto [phi_opt, neg_fp] = boost::math::tools::brent_find_minima(neg_ratio, best->phi - step, best->phi + step, 40);
    if (-neg_fp <= best->peak.f_p) {
        return *best;
    }
    EnhancementCell c = *best;
    c.phi = normalize_phase(phi_opt);
    c.peak = peak_metrics(purcell_spectrum(q.with_phase(phi_opt), grid));
    c.baseline = base;
    return c;
}

std::vector<EnhancementCell> enhancement_map(const SystemParams& p,
                                             const std::vector<double>& qc_grid,
                                             const std::vector<double>& g1_grid,
                                             std::size_t n_phi)
{
    std::vector<EnhancementCell> out;
    for (double qc : qc_grid) {
        for (double g1 : g1_grid) {
            SystemParams q = p.with_photonic_quality(qc);
            q.couplings.g1 = g1;
            out.push_back(optimize_phase(q, n_phi));
        }
    }
    return out;
}

std::vector<EnhancementCell> enhancement_map_phase(const SystemParams& p,
                                                   const std::vector<double>& qc_grid,
                                                   const std::vector<double>& phi_grid)
{
    std::vector<EnhancementCell> out;
    for (double qc : qc_grid) {
        for (double phi : phi_grid) {
            out.push_back(enhancement_at(p.with_photonic_quality(qc).with_phase(phi)));
        }
    }
    return out;
}

OptimalCoupling optimal_g1(double delta_ac, double kappa_c)
{
    if (!std::isfinite(delta_ac) || !std::isfinite(kappa_c) || delta_ac < 0.0 || !(kappa_c > 0.0)) {
        fail(ErrorCode::DomainError, "optimal_g1 needs delta_ac >= 0 and kappa_c > 0");
    }
    OptimalCoupling o;
    o.g1 = -std::sqrt(3.0 * delta_ac * kappa_c) / 2.0;
    o.degenerate = delta_ac == 0.0;
    return o;
}

} // namespace chiralpoint
