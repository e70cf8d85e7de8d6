#ifndef CHIRALPOINT_DYNAMICS_HPP
#define CHIRALPOINT_DYNAMICS_HPP

#include "chiralpoint/generator.hpp"
#include "chiralpoint/params.hpp"
#include "chiralpoint/spectrum.hpp"

#include <vector>

namespace chiralpoint
{

struct EmissionResult
{
    ComplexSpectrum spectrum;       // S(omega), 1/eV, unit area
    ComplexSpectrum lamb_shift;     // Delta(omega) = Re chi_sys
    ComplexSpectrum local_coupling; // Gamma(omega) = -2 Im chi_sys
};

// <sigma+ sigma-(omega)> = i / (omega - omega_0 + i gamma/2 - chi_sys).
cdouble emitter_correlation(const SystemParams& params, double omega);

// S(omega) = (1/pi) Re <sigma+ sigma-(omega)>.
double emission_density(const SystemParams& params, double omega);

// Emitter moved onto the maximum of J on the cavity window.
SystemParams emitter_at_ldos_peak(const SystemParams& params, std::size_t points = 4001);

// Uniform span of omega_0 +- 20 kappa, widened and densified around every
// pole within 0.5 eV of the emitter.
std::vector<double> emission_grid(const SystemParams& params, std::size_t points = 4001);

EmissionResult emission_spectrum(const SystemParams& params, const std::vector<double>& grid);

enum class DynamicsMethod
{
    SpectralFT,
    DirectODE,
};

struct DynamicsOptions
{
    // SpectralFT: total frequency span (eV) of the quadrature grid; 0 picks
    // 60 x the widest linewidth. Spans under 50 x raise AliasError.
    double spectral_span = 0.0;
    // points per linewidth in the dense windows around each pole
    double points_per_width = 20.0;
    // DirectODE: RK4 step in hbar/eV; 0 picks the largest allowed step.
    double ode_step = 0.0;
};

// Largest RK4 step accepted: 0.01 / ||M_0 - omega_0||_F (rotating frame).
double max_ode_step(const SystemParams& params);

// Emitter population |c_e(t)|^2 after starting fully excited; t in hbar/eV,
// t_grid must start at 0 and be uniform.
std::vector<double> qe_dynamics(const SystemParams& params, const std::vector<double>& t_grid,
                                DynamicsMethod method, const DynamicsOptions& options = {});

// Complex amplitude c_e(t) from the Fourier integral of S.
std::vector<cdouble> qe_amplitude_spectral(const SystemParams& params, const std::vector<double>& t_grid,
                                           const DynamicsOptions& options = {});

// Quadrature grid used by the spectral route.
std::vector<double> spectral_quadrature_grid(const SystemParams& params, const DynamicsOptions& options = {});

} // namespace chiralpoint

#endif
