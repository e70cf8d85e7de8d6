#include "chiralpoint/units.hpp"

#include "chiralpoint/errors.hpp"

#include <optional>
#include <string>

namespace chiralpoint::units
{

namespace
{

enum class Dimension
{
    Energy,
    Dipole,
    Time,
};

struct UnitInfo
{
    Dimension dimension;
    double to_base; // multiply to reach the base unit of the dimension
};

// Base units: eV, C m, s.
UnitInfo info(Unit u)
{
    switch (u) {
    case Unit::ElectronVolt: return {Dimension::Energy, 1.0};
    case Unit::RadPerSecond: return {Dimension::Energy, hbar_ev_s};
    case Unit::Debye: return {Dimension::Dipole, debye_si};
    case Unit::CoulombMeter: return {Dimension::Dipole, 1.0};
    case Unit::HbarPerEv: return {Dimension::Time, hbar_ev_s};
    case Unit::Femtosecond: return {Dimension::Time, 1e-15};
    }
    fail(ErrorCode::UnsupportedUnit, "unknown unit");
}

} // namespace

double unit_convert(double value, Unit from, Unit to)
{
    const UnitInfo a = info(from);
    const UnitInfo b = info(to);
    if (a.dimension != b.dimension) {
        fail(ErrorCode::UnsupportedUnit,
             "cannot convert between units of different dimension");
    }
    if (from == to) {
        return value;
    }
    return value * (a.to_base / b.to_base);
}

} // namespace chiralpoint::units
