#ifndef CHIRALPOINT_YIELD_HPP
#define CHIRALPOINT_YIELD_HPP

#include "chiralpoint/params.hpp"
#include "chiralpoint/spectrum.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace chiralpoint
{

// Driven steady state in the Traveling4 basis (sigma, a, c_ccw, c_cw).
struct SteadyState
{
    Eigen::Vector4cd amplitudes = Eigen::Vector4cd::Zero(); // actual amplitudes
    double drive_amplitude = 0.0;
    double detuning = 0.0; // Delta_L = omega_c - omega_L
    DriveTarget target = DriveTarget::Emitter;

    // amplitudes for a unit drive (zero if the drive is off)
    Eigen::Vector4cd per_unit() const;
};

// p = -(M_0 - omega_L)^{-1} Omega. SingularAtDetuning if the solve is singular.
SteadyState steady_state(const SystemParams& params, const Drive& drive);

struct BudgetOptions
{
    bool include_gamma_nr = true; // gamma_nr |sigma|^2 in Phi_d
    bool include_kappa_i = true;  // kappa_i (|c_ccw|^2 + |c_cw|^2) in Phi_d
};

struct PowerBudget
{
    double phi_r = 0.0;
    double phi_d = 0.0;
    double eta = 0.0;
};

PowerBudget power_budget(const SteadyState& state, const SystemParams& params, const BudgetOptions& options = {});

// Delta_L grid: a wide coarse sweep plus a fine sweep over +-fine_half_width_kappa * kappa.
struct DetuningScan
{
    double wide_half_width = 0.3; // eV
    std::size_t wide_points = 3001;
    double fine_half_width_kappa = 20.0;
    std::size_t fine_points = 4001;
    bool refine = true; // Brent refinement of the eta maximum
};

std::vector<double> detuning_grid(const SystemParams& params, const DetuningScan& scan);

// eta(Delta_L) for an emitter drive on an explicit grid.
ComplexSpectrum yield_spectrum(const SystemParams& params, const std::vector<double>& detunings,
                               const BudgetOptions& options = {});

// eta maximum over the whole scan; Phi_r maximum and Phi_d minimum over the
// fine cavity window.
struct ScanSummary
{
    double eta_max = 0.0;
    double delta_at_max = 0.0;
    PowerBudget budget_at_max;
    double phi_r_max = 0.0;
    double phi_d_min = 0.0;
    double delta_at_phi_d_min = 0.0;
    double fine_step = 0.0;
};

// Throws ValidationError when the fine step exceeds kappa / 20.
ScanSummary scan_yield(const SystemParams& params, const DetuningScan& scan = {}, const BudgetOptions& options = {});

struct YieldCell
{
    double q_c = 0.0;
    double phi = 0.0;
    double eta = 0.0;
    double eta0 = 0.0;
    double eta_r = 0.0; // max Phi_r / max Phi_r^0
    double eta_d = 0.0; // min Phi_d^0 / min Phi_d
    double delta_at_max = 0.0;
    double delta_at_phi_d_min = 0.0;
    double fine_step = 0.0;
    // Phi_r / Phi_r^0 at the eta-maximising Delta_L of the mirrored system
    double phi_r_gain_at_max = 0.0;
};

YieldCell yield_cell(const SystemParams& params, const DetuningScan& scan = {}, const BudgetOptions& options = {});

// Rows ordered Q_c major; jobs > 1 evaluates cells on worker threads.
std::vector<YieldCell> yield_map(const SystemParams& params, const std::vector<double>& qc_grid,
                                 const std::vector<double>& phi_grid, const DetuningScan& scan = {},
                                 const BudgetOptions& options = {}, unsigned jobs = 1);

} // namespace chiralpoint

#endif
