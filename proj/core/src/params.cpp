#include "chiralpoint/params.hpp"

#include "chiralpoint/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace chiralpoint
{

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_finite(ValidationReport& report, const std::string& field, double v)
{
    if (!std::isfinite(v)) {
        report.violations.push_back({field, field + " must be finite"});
    }
}

void check_nonnegative(ValidationReport& report, const std::string& field, double v)
{
    check_finite(report, field, v);
    if (v < 0.0) {
        report.violations.push_back({field, field + " must be non-negative"});
    }
}

void check_positive(ValidationReport& report, const std::string& field, double v)
{
    check_finite(report, field, v);
    if (!(v > 0.0)) {
        report.violations.push_back({field, field + " must be positive"});
    }
}

} // namespace

double normalize_phase(double phi)
{
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    // fmod can return exactly two_pi after the shift for tiny negative input
    if (r >= two_pi) {
        r -= two_pi;
    }
    return r;
}

SystemParams SystemParams::without_mirror() const
{
    SystemParams p = *this;
    p.mirror.present = false;
    return p;
}

SystemParams SystemParams::with_phase(double phi) const
{
    SystemParams p = *this;
    p.mirror.phi = normalize_phase(phi);
    return p;
}

SystemParams SystemParams::with_photonic_quality(double q) const
{
    SystemParams p = *this;
    set_parameter(p, "photon.Q_c", q);
    return p;
}

std::string ValidationReport::summary() const
{
    if (ok()) {
        return "pass";
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) {
            os << "; ";
        }
        os << violations[i].field << ": " << violations[i].message;
    }
    return os.str();
}

ValidationReport validate(const SystemParams& p)
{
    ValidationReport r;
    check_positive(r, "plasmon.omega_a", p.plasmon.omega_a);
    check_nonnegative(r, "plasmon.kappa_r", p.plasmon.kappa_r);
    check_nonnegative(r, "plasmon.kappa_o", p.plasmon.kappa_o);
    if (!(p.plasmon.kappa_a() > 0.0)) {
        r.violations.push_back({"plasmon.kappa_a", "kappa_a must be positive"});
    }

    check_positive(r, "photon.omega_c", p.photon.omega_c);
    check_nonnegative(r, "photon.kappa_i", p.photon.kappa_i);
    check_nonnegative(r, "photon.kappa_c", p.photon.kappa_c);
    if (!(p.photon.kappa() > 0.0)) {
        r.violations.push_back({"photon.kappa", "kappa must be positive"});
    }

    check_finite(r, "mirror.phi", p.mirror.phi);

    check_finite(r, "emitter.omega_0", p.emitter.omega_0);
    check_nonnegative(r, "emitter.gamma_0", p.emitter.gamma_0);
    check_nonnegative(r, "emitter.gamma_nr", p.emitter.gamma_nr);
    check_nonnegative(r, "emitter.gamma_m", p.emitter.gamma_m);
    check_nonnegative(r, "emitter.mu_debye", p.emitter.mu_debye);

    check_finite(r, "couplings.g1", p.couplings.g1);
    check_finite(r, "couplings.ga", p.couplings.ga);
    check_finite(r, "couplings.gc", p.couplings.gc);
    return r;
}

ValidationReport validate(const Drive& d)
{
    ValidationReport r;
    check_finite(r, "drive.omega_L", d.omega_L);
    check_nonnegative(r, "drive.amplitude", d.amplitude);
    return r;
}

void require_valid(const SystemParams& params)
{
    const ValidationReport report = validate(params);
    if (!report.ok()) {
        fail(ErrorCode::ValidationError, report.summary());
    }
}

const std::vector<std::string>& parameter_paths()
{
    static const std::vector<std::string> paths = {
        "plasmon.omega_a", "plasmon.kappa_r", "plasmon.kappa_o", "plasmon.Q_a",
        "photon.omega_c", "photon.kappa_i", "photon.kappa_c", "photon.Q_c",
        "photon.kappa_c_over_kappa_i",
        "mirror.present", "mirror.phi", "mirror.phi_over_pi",
        "emitter.omega_0", "emitter.gamma_0", "emitter.gamma_nr", "emitter.gamma_m",
        "emitter.mu_debye",
        "couplings.g1", "couplings.ga", "couplings.gc",
    };
    return paths;
}

double get_parameter(const SystemParams& p, const std::string& path)
{
    if (path == "plasmon.omega_a") return p.plasmon.omega_a;
    if (path == "plasmon.kappa_r") return p.plasmon.kappa_r;
    if (path == "plasmon.kappa_o") return p.plasmon.kappa_o;
    if (path == "plasmon.Q_a") return p.plasmon.quality();
    if (path == "photon.omega_c") return p.photon.omega_c;
    if (path == "photon.kappa_i") return p.photon.kappa_i;
    if (path == "photon.kappa_c") return p.photon.kappa_c;
    if (path == "photon.Q_c") return p.photon.quality();
    if (path == "photon.kappa_c_over_kappa_i") return p.photon.kappa_c / p.photon.kappa_i;
    if (path == "mirror.present") return p.mirror.present ? 1.0 : 0.0;
    if (path == "mirror.phi") return p.mirror.phi;
    if (path == "mirror.phi_over_pi") return p.mirror.phi / std::numbers::pi;
    if (path == "emitter.omega_0") return p.emitter.omega_0;
    if (path == "emitter.gamma_0") return p.emitter.gamma_0;
    if (path == "emitter.gamma_nr") return p.emitter.gamma_nr;
    if (path == "emitter.gamma_m") return p.emitter.gamma_m;
    if (path == "emitter.mu_debye") return p.emitter.mu_debye;
    if (path == "couplings.g1") return p.couplings.g1;
    if (path == "couplings.ga") return p.couplings.ga;
    if (path == "couplings.gc") return p.couplings.gc;
    fail(ErrorCode::SchemaError, "unknown parameter path '" + path + "'");
}

void set_parameter(SystemParams& p, const std::string& path, double v)
{
    if (path == "plasmon.omega_a") { p.plasmon.omega_a = v; return; }
    if (path == "plasmon.kappa_r") { p.plasmon.kappa_r = v; return; }
    if (path == "plasmon.kappa_o") { p.plasmon.kappa_o = v; return; }
    if (path == "plasmon.Q_a") {
        if (!(v > 0.0)) {
            fail(ErrorCode::ValidationError, "plasmon.Q_a must be positive");
        }
        // total width from Q_a; the radiative share is kept
        p.plasmon.kappa_o = p.plasmon.omega_a / v - p.plasmon.kappa_r;
        return;
    }
    if (path == "photon.omega_c") { p.photon.omega_c = v; return; }
    if (path == "photon.kappa_i") { p.photon.kappa_i = v; return; }
    if (path == "photon.kappa_c") { p.photon.kappa_c = v; return; }
    if (path == "photon.Q_c") {
        if (!(v > 0.0)) {
            fail(ErrorCode::ValidationError, "photon.Q_c must be positive");
        }
        const double kappa = p.photon.omega_c / v;
        const double old = p.photon.kappa();
        const double share_c = old > 0.0 ? p.photon.kappa_c / old : 1.0;
        p.photon.kappa_c = kappa * share_c;
        p.photon.kappa_i = kappa - p.photon.kappa_c;
        return;
    }
    if (path == "photon.kappa_c_over_kappa_i") {
        if (!(v > 0.0)) {
            fail(ErrorCode::ValidationError, "photon.kappa_c_over_kappa_i must be positive");
        }
        const double kappa = p.photon.kappa();
        p.photon.kappa_i = kappa / (1.0 + v);
        p.photon.kappa_c = kappa - p.photon.kappa_i;
        return;
    }
    if (path == "mirror.present") { p.mirror.present = v != 0.0; return; }
    if (path == "mirror.phi") { p.mirror.phi = normalize_phase(v); return; }
    if (path == "mirror.phi_over_pi") { p.mirror.phi = normalize_phase(v * std::numbers::pi); return; }
    if (path == "emitter.omega_0") { p.emitter.omega_0 = v; return; }
    if (path == "emitter.gamma_0") { p.emitter.gamma_0 = v; return; }
    if (path == "emitter.gamma_nr") { p.emitter.gamma_nr = v; return; }
    if (path == "emitter.gamma_m") { p.emitter.gamma_m = v; return; }
    if (path == "emitter.mu_debye") { p.emitter.mu_debye = v; return; }
    if (path == "couplings.g1") { p.couplings.g1 = v; return; }
    if (path == "couplings.ga") { p.couplings.ga = v; return; }
    if (path == "couplings.gc") { p.couplings.gc = v; return; }
    fail(ErrorCode::SchemaError, "unknown parameter path '" + path + "'");
}

} // namespace chiralpoint
