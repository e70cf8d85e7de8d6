#ifndef CHIRALPOINT_UNITS_HPP
#define CHIRALPOINT_UNITS_HPP

#include <numbers>

// Internal unit system: hbar = 1, every energy and rate in eV, time in hbar/eV.
namespace chiralpoint::units
{

// CODATA exact / recommended values (SI).
inline constexpr double planck_h = 6.62607015e-34;                      // J s
inline constexpr double hbar_si = planck_h / (2.0 * std::numbers::pi);  // J s
inline constexpr double elementary_charge = 1.602176634e-19;           // C
inline constexpr double speed_of_light = 299792458.0;                  // m / s
inline constexpr double vacuum_permittivity = 8.8541878188e-12;        // F / m

inline constexpr double hbar_ev_s = hbar_si / elementary_charge;        // eV s
inline constexpr double debye_si = 1e-21 / speed_of_light;              // C m
inline constexpr double milli_ev = 1e-3;
inline constexpr double micro_ev = 1e-6;

enum class Unit
{
    ElectronVolt,
    RadPerSecond,
    Debye,
    CoulombMeter,
    HbarPerEv,
    Femtosecond,
};

// Throws Error(UnsupportedUnit) for pairs of different dimension.
double unit_convert(double value, Unit from, Unit to);

inline double ev_to_fs_time(double t_hbar_per_ev) { return unit_convert(t_hbar_per_ev, Unit::HbarPerEv, Unit::Femtosecond); }
inline double fs_to_internal_time(double t_fs) { return unit_convert(t_fs, Unit::Femtosecond, Unit::HbarPerEv); }

} // namespace chiralpoint::units

#endif
