#include "chiralpoint/generator.hpp"

#include "chiralpoint/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace chiralpoint
{

namespace
{

constexpr cdouble I{0.0, 1.0};

} // namespace

GeneratorMatrix build_generator(const SystemParams& p, Basis basis, std::optional<double> detuned_by)
{
    const double wl = detuned_by.value_or(0.0);
    const cdouble e = p.mirror.present ? std::polar(1.0, p.mirror.phi) : cdouble{0.0, 0.0};
    const double g1 = p.couplings.g1;
    const double ga = p.couplings.ga;
    const double gc = p.couplings.gc;
    const double kc = p.photon.kappa_c;
    const double ki = p.photon.kappa_i;
    const double s2 = std::numbers::sqrt2;

    const cdouble ws = p.emitter.omega_0 - wl - I * (p.emitter.gamma() / 2.0);
    const cdouble wa = p.plasmon.omega_a - wl - I * (p.plasmon.kappa_a() / 2.0);
    const cdouble wc = p.photon.omega_c - wl - I * (p.photon.kappa() / 2.0);
    const double wc_re = p.photon.omega_c - wl;

    GeneratorMatrix g;
    g.basis = basis;
    g.detuned_by = detuned_by;

    switch (basis) {
    case Basis::Traveling4: {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
        m(0, 0) = ws;
        m(0, 1) = m(1, 0) = ga;
        m(0, 2) = m(2, 0) = gc;
        m(0, 3) = m(3, 0) = gc;
        m(1, 1) = wa;
        m(1, 2) = m(2, 1) = g1;
        m(1, 3) = m(3, 1) = g1;
        m(2, 2) = wc;
        m(3, 3) = wc;
        m(3, 2) = -I * kc * e; // ccw -> cw through the mirror
        g.entries = m;
        break;
    }
    case Basis::Standing4:
    case Basis::CavityBlock3: {
        const cdouble kp = ki + kc * (1.0 + e);
        const cdouble km = ki + kc * (1.0 - e);
        Eigen::Matrix3cd c;
        c << wa, s2 * g1, 0.0,
            s2 * g1, wc_re - I * kp / 2.0, I * kc * e / 2.0,
            0.0, -I * kc * e / 2.0, wc_re - I * km / 2.0;
        if (basis == Basis::CavityBlock3) {
            g.entries = c;
        }
        else {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
            m(0, 0) = ws;
            m(0, 1) = m(1, 0) = ga;
            m(0, 2) = m(2, 0) = s2 * gc;
            m.block(1, 1, 3, 3) = c;
            g.entries = m;
        }
        break;
    }
    }
    return g;
}

Eigen::Matrix4cd traveling_to_standing()
{
    const double r = 1.0 / std::numbers::sqrt2;
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    u(2, 2) = r;
    u(2, 3) = r;
    u(3, 2) = -r;
    u(3, 3) = r;
    return u;
}

Eigen::VectorXcd eigenvalues(const GeneratorMatrix& m)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.entries, false);
    if (es.info() != Eigen::Success) {
        fail(ErrorCode::NonConvergence, "eigenvalue solve failed");
    }
    return es.eigenvalues();
}

Eigen::Matrix3cd cavity_resolvent(const SystemParams& p, double omega)
{
    const Eigen::Matrix3cd ms = build_generator(p, Basis::CavityBlock3).entries;
    const Eigen::Matrix3cd a = omega * Eigen::Matrix3cd::Identity() - ms;
    Eigen::PartialPivLU<Eigen::Matrix3cd> lu(a);
    if (!(lu.rcond() > 1e-14)) {
        fail(ErrorCode::SingularResolvent, "omega = " + std::to_string(omega) + " eV hits an undamped eigenvalue");
    }
    return lu.inverse();
}

cdouble chi_sys(const SystemParams& p, double omega)
{
    const Eigen::Vector3cd v(p.couplings.ga, std::numbers::sqrt2 * p.couplings.gc, 0.0);
    return v.transpose() * cavity_resolvent(p, omega) * v;
}

} // namespace chiralpoint
