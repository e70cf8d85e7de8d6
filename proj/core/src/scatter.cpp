#include "chiralpoint/scatter.hpp"

#include "chiralpoint/errors.hpp"
#include "chiralpoint/generator.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace chiralpoint
{

namespace
{

Eigen::Matrix3cd channel_matrix(const SystemParams& p)
{
    Eigen::Matrix3cd g = Eigen::Matrix3cd::Zero();
    g(0, 0) = p.plasmon.kappa_a();
    g(1, 1) = p.photon.kappa_c;
    g(2, 2) = p.photon.kappa_c;
    return g;
}

Eigen::Vector3cd lorentz_terms(const EigenSystem& es, double delta)
{
    Eigen::Vector3cd u;
    for (int i = 0; i < 3; ++i) {
        u[i] = es.gamma(i) / (delta + es.eigenvalues[static_cast<std::size_t>(i)]) * es.radiation[i];
    }
    return u;
}

} // namespace

Eigen::Matrix3cd cavity_block(const SystemParams& p)
{
    Eigen::Matrix3cd m = build_generator(p, Basis::CavityBlock3).entries;
    m -= p.photon.omega_c * Eigen::Matrix3cd::Identity();
    return m;
}

EigenSystem make_eigensystem(const SystemParams& p, const Eigen::Matrix3cd& rows,
                             const std::array<cdouble, 3>& lam)
{
    EigenSystem es;
    es.eigenvalues = lam;
    es.v_matrix = rows;
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(rows);
    const auto sv = svd.singularValues();
    es.condition = sv[2] > 0.0 ? sv[0] / sv[2] : INFINITY;
    es.radiation = rows.col(0);

    const cdouble det = rows.determinant();
    es.p = 1.0 / std::norm(det);
    // adj(V) = det(V) V^{-1}
    const Eigen::Matrix3cd adj = det * rows.inverse();
    Eigen::Matrix3cd w = adj;
    for (int i = 0; i < 3; ++i) {
        w.col(i) /= es.gamma(i);
    }
    es.weights = es.p * (w.adjoint() * channel_matrix(p) * w);
    return es;
}

EigenSystem eigendecompose_cavity(const SystemParams& p, const EigenOptions& o)
{
    require_valid(p);
    const Eigen::Matrix3cd m = cavity_block(p);
    // left eigenvectors of M are right eigenvectors of M^T
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(m.transpose());
    if (solver.info() != Eigen::Success) {
        fail(ErrorCode::NonConvergence, "cavity eigen solve failed");
    }
    std::array<int, 3> order{0, 1, 2};
    const auto lam = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lam[a].imag() < lam[b].imag(); });

    Eigen::Matrix3cd rows;
    std::array<cdouble, 3> sorted{};
    for (int i = 0; i < 3; ++i) {
        const int k = order[static_cast<std::size_t>(i)];
        rows.row(i) = solver.eigenvectors().col(k).transpose().normalized();
        sorted[static_cast<std::size_t>(i)] = lam[k];
        if (!(lam[k].imag() < 0.0)) {
            fail(ErrorCode::DefectiveMatrix, "undamped cavity eigenmode; weights are undefined");
        }
    }
    EigenSystem es = make_eigensystem(p, rows, sorted);
    if (!o.allow_defective) {
        // a rounded Jordan block splits by ~sqrt(eps) |M| and can keep cond(V) far below the threshold
        const double split = 100.0 * std::sqrt(std::numeric_limits<double>::epsilon()) * m.norm();
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                const cdouble a = sorted[static_cast<std::size_t>(i)], b = sorted[static_cast<std::size_t>(j)];
                if (std::abs(a - b) > split) {
                    continue;
                }
                const Eigen::Matrix3cd shifted = m - 0.5 * (a + b) * Eigen::Matrix3cd::Identity();
                const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3cd>(shifted).singularValues();
                if (sv[1] > split) { // one eigenvector for a double eigenvalue
                    fail(ErrorCode::DefectiveMatrix, "degenerate eigenvalue pair with a single eigenvector");
                }
            }
        }
    }
    if (!o.allow_defective && !(es.condition <= o.defect_threshold)) {
        fail(ErrorCode::DefectiveMatrix, "eigenvector condition number " + std::to_string(es.condition)
                                             + " exceeds " + std::to_string(o.defect_threshold));
    }
    return es;
}

double scatter_direct(const SystemParams& p, double delta)
{
    const Eigen::Matrix3cd a = cavity_block(p) + delta * Eigen::Matrix3cd::Identity();
    Eigen::PartialPivLU<Eigen::Matrix3cd> lu(a);
    if (!(lu.rcond() > 1e-14)) {
        fail(ErrorCode::SingularAtDetuning, "cavity block singular at Delta_L = " + std::to_string(delta));
    }
    const Eigen::Vector3cd c = -lu.solve(Eigen::Vector3cd(1.0, 0.0, 0.0));
    return p.plasmon.kappa_a() * std::norm(c[0]) + p.photon.kappa_c * (std::norm(c[1]) + std::norm(c[2]));
}

double scatter_eigen(const EigenSystem& es, double delta)
{
    const Eigen::Vector3cd u = lorentz_terms(es, delta);
    return (u.adjoint() * es.weights * u)(0, 0).real();
}

ComplexSpectrum scatter_spectrum(const SystemParams& p, const std::vector<double>& grid, ScatterRoute route,
                                 const EigenOptions& o)
{
    require_valid(p);
    std::vector<double> s(grid.size());
    if (route == ScatterRoute::Direct) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            s[i] = scatter_direct(p, grid[i]);
        }
    }
    else {
        const EigenSystem es = eigendecompose_cavity(p, o);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            s[i] = scatter_eigen(es, grid[i]);
        }
    }
    return ComplexSpectrum::from_real(grid, s);
}

std::string_view to_string(Mechanism m)
{
    switch (m) {
    case Mechanism::Superscattering:
        return "Superscattering";
    case Mechanism::EITIntermediate:
        return "EITIntermediate";
    case Mechanism::Other:
        break;
    }
    return "Other";
}

Mechanism classify(double sup, double so)
{
    if (sup > 0.0 && so > 0.0) {
        return Mechanism::Superscattering;
    }
    if (sup > 0.0 && so < 0.0) {
        return Mechanism::EITIntermediate;
    }
    return Mechanism::Other;
}

ScatterDecomposition decompose(const EigenSystem& es, double delta)
{
    const Eigen::Vector3cd u = lorentz_terms(es, delta);
    ScatterDecomposition d;
    d.sigma_total = (u.adjoint() * es.weights * u)(0, 0).real();
    d.sigma_sup = (std::conj(u[0]) * es.weights(0, 0) * u[0]).real();
    d.sigma_so = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i != 0 || j != 0) {
                d.sigma_so += (std::conj(u[i]) * es.weights(i, j) * u[j]).real();
            }
        }
    }
    d.mechanism = classify(d.sigma_sup, d.sigma_so);
    return d;
}

ScatterDecomposition decompose_sigma0(const SystemParams& p, const EigenOptions& o)
{
    return decompose(eigendecompose_cavity(p, o), 0.0);
}

} // namespace chiralpoint
