#ifndef CHIRALPOINT_CONFIG_HPP
#define CHIRALPOINT_CONFIG_HPP

#include "chiralpoint/fit.hpp"
#include "chiralpoint/params.hpp"
#include "chiralpoint/sweep.hpp"
#include "chiralpoint/yield.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace chiralpoint
{

struct FitSpec
{
    std::string data_path;          // CSV with omega_eV and value columns; relative to the config
    FitQuantity quantity = FitQuantity::Purcell;
    std::vector<FreeParameter> free{FreeParameter::G1};
    FitOptions options;
    // synthetic data instead of a file: model at synthetic_g1 with
    // multiplicative gaussian noise
    std::optional<double> synthetic_g1;
    double synthetic_noise = 0.0;
    std::uint64_t synthetic_seed = 7;
    std::size_t synthetic_points = 401;
};

// Optional "run" section: grids and options for the CLI subcommands.
struct RunSpec
{
    std::optional<double> omega_min;
    std::optional<double> omega_max;
    std::size_t points = 4001;
    std::size_t phi_points = 64;
    std::vector<double> q_c_values;
    std::vector<double> phi_over_pi_values;
    double t_max_fs = 10000.0;
    std::size_t t_points = 2001;
    std::string dynamics_method = "spectral"; // spectral | ode
    double dynamics_step = 0.0;
    double spectral_span = 0.0;
    bool emitter_at_ldos_peak = false;
    double emission_shift = 0.0;
    std::optional<double> deltaL_half_width; // scatter grid, eV
    std::string scatter_route = "eigen";     // eigen | direct
    DetuningScan scan;
    BudgetOptions budget;
    std::optional<SweepSpec> sweep;
    std::optional<FitSpec> fit;
};

struct LoadedConfig
{
    SystemParams params;
    RunSpec run;
    std::string description;
    std::string source;    // file name(s)
    std::string canonical; // merged JSON, keys sorted
    std::string base_dir;  // directory of the config file

    std::string hash() const;
};

// Parses config text. ParseError for malformed JSON, SchemaError for unknown
// keys or wrong types (with line numbers), ValidationError for invalid params.
LoadedConfig parse_config(const std::string& text, const std::string& source = "<string>");
LoadedConfig load_config(const std::string& path);

// Preset text overlaid by an optional config file (JSON merge patch).
LoadedConfig load_with_preset(const std::string& preset, const std::string& config_path);

// Search order: $CHIRALPOINT_PRESETS, then the directory baked in at build time.
std::string preset_directory();
std::string preset_path(const std::string& name);
std::vector<std::string> list_presets();

} // namespace chiralpoint

#endif
