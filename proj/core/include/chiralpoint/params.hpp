#ifndef CHIRALPOINT_PARAMS_HPP
#define CHIRALPOINT_PARAMS_HPP

#include <string>
#include <vector>

// Physical constants of the plasmon / whispering-gallery / emitter system.
// All energies and rates are in eV (hbar = 1).
namespace chiralpoint
{

// Dipolar plasmon resonance. kappa_r is the radiative channel, kappa_o the
// Ohmic (absorptive) channel.
struct PlasmonMode
{
    double omega_a = 0.0;
    double kappa_r = 0.0;
    double kappa_o = 0.0;

    double kappa_a() const { return kappa_r + kappa_o; }
    double quality() const { return omega_a / kappa_a(); }
};

// Degenerate CCW/CW whispering-gallery pair. kappa_c is the leakage into the
// bus waveguide, kappa_i every other loss.
struct PhotonicMode
{
    double omega_c = 0.0;
    double kappa_i = 0.0;
    double kappa_c = 0.0;

    double kappa() const { return kappa_i + kappa_c; }
    double quality() const { return omega_c / kappa(); }
};

// Unit-reflectivity mirror closing the bus waveguide. phi is the roundtrip
// phase, kept in [0, 2pi).
struct MirrorConfig
{
    bool present = false;
    double phi = 0.0;
};

struct Emitter
{
    double omega_0 = 0.0;
    double gamma_0 = 0.0;  // free-space radiative rate
    double gamma_nr = 0.0; // intrinsic nonradiative rate
    double gamma_m = 0.0;  // decay into higher-order plasmon modes
    double mu_debye = 0.0; // dipole moment, only needed for Purcell normalisation

    double gamma() const { return gamma_0 + gamma_nr + gamma_m; }
};

// Real, signed coupling rates.
struct Couplings
{
    double g1 = 0.0; // plasmon - photon
    double ga = 0.0; // plasmon - emitter
    double gc = 0.0; // photon - emitter (per travelling mode)
};

struct SystemParams
{
    PlasmonMode plasmon;
    PhotonicMode photon;
    MirrorConfig mirror;
    Emitter emitter;
    Couplings couplings;

    double detuning_ac() const { return plasmon.omega_a - photon.omega_c; }

    // Same system with the mirror removed (kappa_c stays a loss channel).
    SystemParams without_mirror() const;
    SystemParams with_phase(double phi) const;
    // Sets kappa = omega_c / q, preserving the kappa_c : kappa_i split.
    SystemParams with_photonic_quality(double q) const;
};

enum class DriveTarget
{
    Emitter,
    Plasmon,
};

// Weak coherent drive at laser frequency omega_L.
struct Drive
{
    double omega_L = 0.0;
    double amplitude = 1.0;
    DriveTarget target = DriveTarget::Emitter;
};

double normalize_phase(double phi);

struct Violation
{
    std::string field;
    std::string message;
};

struct ValidationReport
{
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const SystemParams& params);
ValidationReport validate(const Drive& drive);

// Throws Error(ValidationError) carrying the report summary.
void require_valid(const SystemParams& params);

// Every field path the config loader and sweep axes understand.
const std::vector<std::string>& parameter_paths();

// Resolves a dotted path (e.g. "couplings.g1", "photon.Q_c",
// "mirror.phi_over_pi") and returns/sets the value. Derived quantities such as
// Q_c and Q_a are writable and update the underlying rates.
double get_parameter(const SystemParams& params, const std::string& path);
void set_parameter(SystemParams& params, const std::string& path, double value);

} // namespace chiralpoint

#endif
