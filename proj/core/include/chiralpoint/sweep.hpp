#ifndef CHIRALPOINT_SWEEP_HPP
#define CHIRALPOINT_SWEEP_HPP

#include "chiralpoint/export.hpp"
#include "chiralpoint/params.hpp"
#include "chiralpoint/yield.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace chiralpoint
{

enum class Observable
{
    PurcellMax,
    Linewidth,
    Eta,
    Sigma0,
    EnhancementPair,
};

Observable parse_observable(std::string_view s);
std::string_view to_string(Observable o);
std::vector<std::string> observable_columns(Observable o);

struct SweepAxis
{
    std::string path; // a parameter_paths() entry
    double lo = 0.0;
    double hi = 0.0;
    std::size_t points = 2;
    bool log = false;
    std::vector<double> values; // explicit values override lo/hi/points

    std::vector<double> grid() const;
};

struct SweepSpec
{
    std::vector<SweepAxis> axes; // 1 or 2, first axis is the outer one
    Observable observable = Observable::PurcellMax;
    DetuningScan scan;
    BudgetOptions budget;
    std::size_t phi_points = 64;
    std::size_t points = 4001;
};

struct SweepOptions
{
    unsigned jobs = 1;
    std::string checkpoint; // file for resumable runs; empty disables
};

// Throws ValidationError / SchemaError for a malformed spec.
void validate_spec(const SweepSpec& spec);

// Content hash of (spec, params) used to match checkpoints.
std::string sweep_hash(const SweepSpec& spec, const SystemParams& params);

// Evaluate the observable for one parameter set (the body of one sweep cell).
std::vector<double> evaluate_observable(const SweepSpec& spec, const SystemParams& params, std::string* label = nullptr);

// Rows in outer-axis-major order. Cell failures are recorded in the status
// column and do not abort the sweep.
Table run_sweep(const SweepSpec& spec, const SystemParams& params, const SweepOptions& options = {});

} // namespace chiralpoint

#endif
