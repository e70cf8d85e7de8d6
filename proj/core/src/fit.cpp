#include "chiralpoint/fit.hpp"

#include "chiralpoint/errors.hpp"
#include "chiralpoint/response.hpp"

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace chiralpoint
{

FreeParameter parse_free_parameter(std::string_view s)
{
    if (s == "g1") return FreeParameter::G1;
    if (s == "gc") return FreeParameter::Gc;
    if (s == "phi") return FreeParameter::Phi;
    fail(ErrorCode::SchemaError, "unknown free parameter '" + std::string(s) + "' (g1|gc|phi)");
}

std::string_view to_string(FreeParameter f)
{
    switch (f) {
    case FreeParameter::G1: return "g1";
    case FreeParameter::Gc: return "gc";
    case FreeParameter::Phi: return "phi";
    }
    return "?";
}

double FitResult::estimate(FreeParameter f) const
{
    for (std::size_t i = 0; i < free.size(); ++i) {
        if (free[i] == f) {
            return estimates[i];
        }
    }
    fail(ErrorCode::ValidationError, "parameter '" + std::string(to_string(f)) + "' was not fitted");
}

double fit_model(const SystemParams& p, FitQuantity q, double omega)
{
    const double j = spectral_density_at(p, omega);
    return q == FitQuantity::Purcell ? j / free_space_density(omega, p.emitter.mu_debye) : j;
}

ComplexSpectrum synthetic_data(const SystemParams& p, FitQuantity q, const std::vector<double>& grid, double noise,
                               std::uint64_t seed)
{
    require_valid(p);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double clean = fit_model(p, q, grid[i]);
        v[i] = noise > 0.0 ? clean * (1.0 + noise * n01(rng)) : clean;
    }
    return ComplexSpectrum::from_real(grid, v);
}

namespace
{

constexpr double coupling_scale = 1e-3; // couplings are optimised in meV

// x holds scaled parameters; phi enters only through cos/sin of x
SystemParams apply(const SystemParams& base, const std::vector<FreeParameter>& free, const Eigen::VectorXd& x)
{
    SystemParams p = base;
    for (std::size_t i = 0; i < free.size(); ++i) {
        const double v = x[static_cast<Eigen::Index>(i)];
        switch (free[i]) {
        case FreeParameter::G1:
            p.couplings.g1 = v * coupling_scale;
            break;
        case FreeParameter::Gc:
            p.couplings.gc = v * coupling_scale;
            break;
        case FreeParameter::Phi:
            p.mirror.phi = std::atan2(std::sin(v), std::cos(v));
            break;
        }
    }
    return p;
}

struct Residuals
{
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum
    {
        InputsAtCompileTime = Eigen::Dynamic,
        ValuesAtCompileTime = Eigen::Dynamic
    };

    const FitProblem* problem = nullptr;
    std::vector<double> scale; // weight / |data|
    int* calls = nullptr;

    int inputs() const { return static_cast<int>(problem->free.size()); }
    int values() const { return static_cast<int>(problem->data.size()); }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const
    {
        if (calls) {
            ++*calls;
        }
        const SystemParams p = apply(problem->fixed, problem->free, x);
        const auto& g = problem->data.grid;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double model = fit_model(p, problem->quantity, g[i]);
            f[static_cast<Eigen::Index>(i)] = scale[i] * (model - problem->data.values[i].real());
        }
        return 0;
    }
};

Eigen::MatrixXd central_jacobian(const Residuals& r, const Eigen::VectorXd& x)
{
    const Eigen::Index m = r.values();
    const Eigen::Index n = x.size();
    Eigen::MatrixXd jac(m, n);
    Eigen::VectorXd fp(m), fm(m);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
        Eigen::VectorXd xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        r(xp, fp);
        r(xm, fm);
        jac.col(k) = (fp - fm) / (2.0 * h);
    }
    return jac;
}

bool converged(Eigen::LevenbergMarquardtSpace::Status s)
{
    using namespace Eigen::LevenbergMarquardtSpace;
    return s == RelativeReductionTooSmall || s == RelativeErrorTooSmall || s == RelativeErrorAndReductionTooSmall
        || s == CosinusTooSmall || s == XtolTooSmall || s == FtolTooSmall;
}

} // namespace

FitResult fit_g1(const FitProblem& problem, const FitOptions& o)
{
    problem.data.check();
    const std::size_t n = problem.data.size();
    const std::size_t k = problem.free.size();
    if (k == 0) {
        fail(ErrorCode::ValidationError, "fit needs at least one free parameter");
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (problem.free[i] == problem.free[j]) {
                fail(ErrorCode::ValidationError, "free parameter listed twice");
            }
        }
    }
    if (n < 5 * k) {
        fail(ErrorCode::ValidationError, "fit needs at least 5 data points per free parameter");
    }
    if (!problem.weights.empty() && problem.weights.size() != n) {
        fail(ErrorCode::ValidationError, "weights must match the data length");
    }
    if (problem.quantity == FitQuantity::Purcell && !(problem.fixed.emitter.mu_debye > 0.0)) {
        fail(ErrorCode::MissingDipoleMoment, "Purcell data need emitter.mu_debye");
    }
    if (!(o.g1_max > o.g1_min) || !(o.g1_min > 0.0) || o.starts < 2) {
        fail(ErrorCode::ValidationError, "g1 bracket must satisfy 0 < g1_min < g1_max and starts >= 2");
    }
    require_valid(problem.fixed);
    const bool phi_free = std::find(problem.free.begin(), problem.free.end(), FreeParameter::Phi) != problem.free.end();
    SystemParams base = problem.fixed;
    if (phi_free) {
        base.mirror.present = true;
    }
    FitProblem local = problem;
    local.fixed = base;

    int calls = 0;
    Residuals res;
    res.problem = &local;
    res.calls = &calls;
    res.scale.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(problem.data.values[i].real());
        const double w = problem.weights.empty() ? 1.0 : problem.weights[i];
        res.scale[i] = w / (d > 0.0 ? d : 1.0);
    }

    // sign-symmetric, log-spaced g1 starts with seeded jitter
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    const std::size_t per_sign = (o.starts + 1) / 2;
    const std::vector<double> mags = logspace(o.g1_min, o.g1_max, std::max<std::size_t>(per_sign, 2));
    std::vector<Eigen::VectorXd> starts;
    for (std::size_t s = 0; s < o.starts; ++s) {
        const double sign = (s % 2 == 0) ? -1.0 : 1.0;
        const double mag = mags[std::min(s / 2, mags.size() - 1)] * std::exp(jitter(rng));
        Eigen::VectorXd x(static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            switch (problem.free[i]) {
            case FreeParameter::G1:
                x[static_cast<Eigen::Index>(i)] = sign * mag / coupling_scale;
                break;
            case FreeParameter::Gc: {
                const double gc = problem.fixed.couplings.gc != 0.0 ? problem.fixed.couplings.gc : 0.1e-3;
                x[static_cast<Eigen::Index>(i)] = gc / coupling_scale * (1.0 + jitter(rng));
                break;
            }
            case FreeParameter::Phi:
                x[static_cast<Eigen::Index>(i)] = problem.fixed.mirror.phi
                    + 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(o.starts);
                break;
            }
        }
        starts.push_back(x);
    }

    Eigen::VectorXd best_x;
    double best_norm = std::numeric_limits<double>::infinity();
    FitResult out;
    out.free = problem.free;
    for (const auto& x0 : starts) {
        Eigen::VectorXd x = x0;
        Eigen::NumericalDiff<Residuals, Eigen::Central> nd(res);
        Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residuals, Eigen::Central>> lm(nd);
        lm.parameters.xtol = 1e-13;
        lm.parameters.ftol = 1e-15;
        lm.parameters.maxfev = o.max_evaluations;
        Eigen::LevenbergMarquardtSpace::Status status;
        try {
            status = lm.minimize(x);
        }
        catch (const Error&) {
            continue;
        }
        if (!converged(status) || !x.allFinite()) {
            continue;
        }
        ++out.starts_converged;
        Eigen::VectorXd f(static_cast<Eigen::Index>(n));
        res(x, f);
        if (f.norm() < best_norm) {
            best_norm = f.norm();
            best_x = x;
        }
    }
    out.evaluations = calls;
    if (out.starts_converged == 0) {
        fail(ErrorCode::NonConvergence, "no start converged within " + std::to_string(o.max_evaluations)
                                            + " evaluations");
    }

    const Eigen::MatrixXd jac = central_jacobian(res, best_x);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jtj);
    const auto sv = svd.singularValues();
    out.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();

    out.params = apply(base, problem.free, best_x);
    out.params.mirror.phi = normalize_phase(out.params.mirror.phi);
    out.residual_norm = best_norm / std::sqrt(static_cast<double>(n));
    out.estimates.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        switch (problem.free[i]) {
        case FreeParameter::G1: out.estimates[i] = out.params.couplings.g1; break;
        case FreeParameter::Gc: out.estimates[i] = out.params.couplings.gc; break;
        case FreeParameter::Phi: out.estimates[i] = out.params.mirror.phi; break;
        }
    }
    if (!(out.condition <= o.condition_limit)) {
        fail(ErrorCode::IllConditionedFit, "covariance condition number " + std::to_string(out.condition)
                                               + " exceeds " + std::to_string(o.condition_limit));
    }

    const double dof = static_cast<double>(n > k ? n - k : 1);
    const double s2 = best_norm * best_norm / dof;
    Eigen::MatrixXd cov = s2 * jtj.inverse();
    // back to physical units
    Eigen::VectorXd unit(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        unit[static_cast<Eigen::Index>(i)] = problem.free[i] == FreeParameter::Phi ? 1.0 : coupling_scale;
    }
    out.covariance = unit.asDiagonal() * cov * unit.asDiagonal();
    out.sigma.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.sigma[i] = std::sqrt(std::max(0.0, out.covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))));
    }
    return out;
}

} // namespace chiralpoint
