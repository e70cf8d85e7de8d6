#ifndef CHIRALPOINT_GENERATOR_HPP
#define CHIRALPOINT_GENERATOR_HPP

#include "chiralpoint/params.hpp"
#include "chiralpoint/spectrum.hpp"

#include <Eigen/Dense>

#include <optional>

namespace chiralpoint
{

// Traveling4:   (sigma, a, c_ccw, c_cw)
// Standing4:    (sigma, a, c_1, c_2) with c_1 = (c_ccw + c_cw)/sqrt2, c_2 = (c_cw - c_ccw)/sqrt2
// CavityBlock3: (a, c_1, c_2)
enum class Basis
{
    Traveling4,
    Standing4,
    CavityBlock3,
};

struct GeneratorMatrix
{
    Basis basis = Basis::Traveling4;
    Eigen::MatrixXcd entries;
    std::optional<double> detuned_by; // omega_L subtracted from the diagonal

    Eigen::Index dim() const { return entries.rows(); }
};

// Single-excitation generator, d p / dt = -i M p.
GeneratorMatrix build_generator(const SystemParams& params, Basis basis,
                                std::optional<double> detuned_by = std::nullopt);

// Unitary taking Traveling4 amplitudes to Standing4 amplitudes.
Eigen::Matrix4cd traveling_to_standing();

Eigen::VectorXcd eigenvalues(const GeneratorMatrix& m);

// (omega I - M_s)^{-1} in the CavityBlock3 basis; SingularResolvent when
// the solve is numerically singular.
Eigen::Matrix3cd cavity_resolvent(const SystemParams& params, double omega);

// chi_sys = v^T (omega I - M_s)^{-1} v, v = (ga, sqrt2 gc, 0).
cdouble chi_sys(const SystemParams& params, double omega);

} // namespace chiralpoint

#endif
