#ifndef CHIRALPOINT_FIT_HPP
#define CHIRALPOINT_FIT_HPP

#include "chiralpoint/params.hpp"
#include "chiralpoint/spectrum.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

namespace chiralpoint
{

enum class FreeParameter
{
    G1,
    Gc,
    Phi,
};

FreeParameter parse_free_parameter(std::string_view s);
std::string_view to_string(FreeParameter f);

enum class FitQuantity
{
    Purcell, // data are P(omega)
    Spectral, // data are J(omega) in eV
};

struct FitProblem
{
    ComplexSpectrum data; // real values
    FitQuantity quantity = FitQuantity::Purcell;
    SystemParams fixed;   // free entries are used as starting hints
    std::vector<FreeParameter> free;
    std::vector<double> weights; // optional, per point
};

struct FitOptions
{
    // |g1| range (eV) for the sign-symmetric multi-start
    double g1_min = 1e-3;
    double g1_max = 50e-3;
    std::size_t starts = 8;
    std::uint64_t seed = 20240611;
    int max_evaluations = 4000;
    double condition_limit = 1e10;
};

struct FitResult
{
    std::vector<FreeParameter> free;
    std::vector<double> estimates; // eV for couplings, radians in [0, 2pi) for phi
    std::vector<double> sigma;     // 1 sigma from the Gauss-Newton covariance
    Eigen::MatrixXd covariance;
    double residual_norm = 0.0;    // rms of the weighted relative residuals
    double condition = 0.0;        // of J^T J in scaled units (meV, rad)
    int evaluations = 0;
    std::size_t starts_converged = 0;
    SystemParams params;           // fixed with the estimates filled in

    double estimate(FreeParameter f) const;
};

// Model value at one frequency for the quantity being fitted.
double fit_model(const SystemParams& params, FitQuantity quantity, double omega);

// Model spectrum on the grid with multiplicative gaussian noise
// value * (1 + noise * N(0,1)), drawn from mt19937_64(seed).
ComplexSpectrum synthetic_data(const SystemParams& params, FitQuantity quantity, const std::vector<double>& grid,
                               double noise, std::uint64_t seed);

// Weighted relative least squares of the complete spectral density model.
// NonConvergence when no start converges, IllConditionedFit when the
// covariance condition number exceeds the limit.
FitResult fit_g1(const FitProblem& problem, const FitOptions& options = {});

} // namespace chiralpoint

#endif
