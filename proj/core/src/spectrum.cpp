#include "chiralpoint/spectrum.hpp"

#include "chiralpoint/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chiralpoint
{

ComplexSpectrum::ComplexSpectrum(std::vector<double> g, std::vector<cdouble> v)
    : grid(std::move(g)), values(std::move(v))
{
    check();
}

ComplexSpectrum ComplexSpectrum::from_real(std::vector<double> g, const std::vector<double>& v)
{
    std::vector<cdouble> c(v.begin(), v.end());
    return ComplexSpectrum(std::move(g), std::move(c));
}

std::vector<double> ComplexSpectrum::real() const
{
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](cdouble z) { return z.real(); });
    return out;
}

std::vector<double> ComplexSpectrum::imag() const
{
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](cdouble z) { return z.imag(); });
    return out;
}

void ComplexSpectrum::check() const
{
    if (grid.size() != values.size()) {
        fail(ErrorCode::ValidationError, "spectrum grid and values differ in length");
    }
    if (grid.size() < 2) {
        fail(ErrorCode::ValidationError, "spectrum needs at least 2 points");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            fail(ErrorCode::ValidationError, "spectrum grid must be strictly increasing");
        }
    }
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    if (n == 0) {
        return {};
    }
    if (n == 1) {
        return {lo};
    }
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n)
{
    if (!(lo > 0.0) || !(hi > 0.0)) {
        fail(ErrorCode::ValidationError, "logarithmic range needs positive end points");
    }
    std::vector<double> e = linspace(std::log(lo), std::log(hi), n);
    for (double& x : e) {
        x = std::exp(x);
    }
    if (n > 1) {
        e.front() = lo;
        e.back() = hi;
    }
    return e;
}

std::vector<double> merge_grids(const std::vector<std::vector<double>>& grids)
{
    std::vector<double> all;
    for (const auto& g : grids) {
        all.insert(all.end(), g.begin(), g.end());
    }
    std::sort(all.begin(), all.end());
    if (all.empty()) {
        return all;
    }
    const double tol = 1e-14 * std::max(std::abs(all.back() - all.front()), std::abs(all.back()));
    std::vector<double> out;
    out.reserve(all.size());
    for (double x : all) {
        if (out.empty() || x - out.back() > tol) {
            out.push_back(x);
        }
    }
    return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y)
{
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    return s;
}

} // namespace chiralpoint
