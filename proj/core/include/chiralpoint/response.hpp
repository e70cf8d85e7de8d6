#ifndef CHIRALPOINT_RESPONSE_HPP
#define CHIRALPOINT_RESPONSE_HPP

#include "chiralpoint/params.hpp"
#include "chiralpoint/spectrum.hpp"

#include <cstddef>
#include <vector>

namespace chiralpoint
{

struct Susceptibilities
{
    cdouble chi_a;
    cdouble chi_c;
    cdouble chi_ep;
};

Susceptibilities bare_susceptibilities(const SystemParams& params, double omega);

// Plasmon, cavity and crossing contributions; J = j_a + j_c + j_ac.
struct SpectralComponents
{
    double j_a = 0.0;
    double j_c = 0.0;
    double j_ac = 0.0;

    double total() const { return j_a + j_c + j_ac; }
};

SpectralComponents spectral_components(const SystemParams& params, double omega);
double spectral_density_at(const SystemParams& params, double omega);

// Emitter coupled through the plasmon only (gc ignored).
double spectral_density_plasmon_only(const SystemParams& params, double omega);

// J(omega) on the grid. Throws NonPositiveLDOS if any value drops below
// -1e-10 of the maximum.
ComplexSpectrum spectral_density(const SystemParams& params, const std::vector<double>& grid);

// Free-space spectral density J_0 in eV for a dipole of mu_debye at omega (eV).
double free_space_density(double omega, double mu_debye);

// P = J / J_0. Throws MissingDipoleMoment when mu is not set.
ComplexSpectrum purcell_spectrum(const SystemParams& params, const std::vector<double>& grid);

struct PeakMetrics
{
    double f_p = 0.0;
    double omega_peak = 0.0;
    double fwhm = 0.0;
    int peak_count = 0; // maxima with prominence >= 5% of f_p
};

PeakMetrics peak_metrics(const ComplexSpectrum& spectrum);
PeakMetrics peak_metrics(const std::vector<double>& grid, const std::vector<double>& values);

// omega_c +- half_width_kappa * kappa around the plasmon-dressed cavity line.
std::vector<double> cavity_window(const SystemParams& params, std::size_t points = 4001, double half_width_kappa = 20.0);
// Cavity window merged with omega_a +- 3 kappa_a.
std::vector<double> default_grid(const SystemParams& params, std::size_t points = 4001);

// One (params, baseline) comparison on the cavity window.
struct EnhancementCell
{
    double q_c = 0.0;
    double g1 = 0.0;
    double phi = 0.0;
    PeakMetrics peak;
    PeakMetrics baseline;

    double ratio_fp() const { return peak.f_p / baseline.f_p; }
    double ratio_width() const { return peak.fwhm / baseline.fwhm; }
};

EnhancementCell enhancement_at(const SystemParams& params, std::size_t points = 4001);

// Enhancement for phi = 2 pi k / n, k = 0..n-1.
std::vector<EnhancementCell> phase_scan(const SystemParams& params, std::size_t n_phi = 64);

// Best phi from a scan, refined by golden-section search on the bracketing interval.
EnhancementCell optimize_phase(const SystemParams& params, std::size_t n_phi = 64);

// Rows ordered Q_c major. With phi optimised per cell.
std::vector<EnhancementCell> enhancement_map(const SystemParams& params,
                                             const std::vector<double>& qc_grid,
                                             const std::vector<double>& g1_grid,
                                             std::size_t n_phi = 64);

// Fixed phases instead of phase optimisation.
std::vector<EnhancementCell> enhancement_map_phase(const SystemParams& params,
                                                   const std::vector<double>& qc_grid,
                                                   const std::vector<double>& phi_grid);

struct OptimalCoupling
{
    double g1 = 0.0;
    bool degenerate = false; // delta_ac == 0: formula has no detuned regime
};

// g1_opt = -sqrt(3 delta_ac kappa_c) / 2. DomainError for negative inputs.
OptimalCoupling optimal_g1(double delta_ac, double kappa_c);

} // namespace chiralpoint

#endif
