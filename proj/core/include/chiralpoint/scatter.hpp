#ifndef CHIRALPOINT_SCATTER_HPP
#define CHIRALPOINT_SCATTER_HPP

#include "chiralpoint/params.hpp"
#include "chiralpoint/spectrum.hpp"

#include <Eigen/Dense>

#include <array>
#include <string_view>
#include <vector>

namespace chiralpoint
{

// Cavity block (a, c_1, c_2) measured from omega_c: M_s - omega_c I.
Eigen::Matrix3cd cavity_block(const SystemParams& params);

struct EigenOptions
{
    double defect_threshold = 1e8;
    bool allow_defective = false; // skip the DefectiveMatrix check
};

struct EigenSystem
{
    std::array<cdouble, 3> eigenvalues{}; // Im < 0, sorted by decreasing gamma_i = -Im
    Eigen::Matrix3cd v_matrix;            // rows: left eigenvectors
    double condition = 0.0;               // 2-norm condition number of v_matrix
    Eigen::Vector3cd radiation;           // C = V s_p (unit plasmon drive)
    Eigen::Matrix3cd weights;             // |det V|^-2 W^H Gamma W, W = adj(V) diag(1/gamma)
    double p = 0.0;                       // |det V|^-2

    double gamma(int i) const { return -eigenvalues[static_cast<std::size_t>(i)].imag(); }
};

EigenSystem eigendecompose_cavity(const SystemParams& params, const EigenOptions& options = {});

// Weights and radiation pattern for given (not necessarily normalised) rows.
EigenSystem make_eigensystem(const SystemParams& params, const Eigen::Matrix3cd& rows,
                             const std::array<cdouble, 3>& eigenvalues);

enum class ScatterRoute
{
    Eigen,
    Direct,
};

// sigma at Delta_L = omega_c - omega_L for a unit plasmon drive.
double scatter_direct(const SystemParams& params, double delta);
double scatter_eigen(const EigenSystem& es, double delta);

ComplexSpectrum scatter_spectrum(const SystemParams& params, const std::vector<double>& grid, ScatterRoute route,
                                 const EigenOptions& options = {});

enum class Mechanism
{
    Superscattering,
    EITIntermediate,
    Other,
};

std::string_view to_string(Mechanism m);

struct ScatterDecomposition
{
    double sigma_total = 0.0;
    double sigma_sup = 0.0;
    double sigma_so = 0.0;
    Mechanism mechanism = Mechanism::Other;
};

Mechanism classify(double sigma_sup, double sigma_so);

ScatterDecomposition decompose_sigma0(const SystemParams& params, const EigenOptions& options = {});
ScatterDecomposition decompose(const EigenSystem& es, double delta = 0.0);

} // namespace chiralpoint

#endif
