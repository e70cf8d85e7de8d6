#ifndef CHIRALPOINT_SPECTRUM_HPP
#define CHIRALPOINT_SPECTRUM_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace chiralpoint
{

using cdouble = std::complex<double>;

// Frequency (or detuning) grid carrying complex values. Real-valued
// quantities store a zero imaginary part.
struct ComplexSpectrum
{
    std::vector<double> grid;
    std::vector<cdouble> values;

    ComplexSpectrum() = default;
    ComplexSpectrum(std::vector<double> g, std::vector<cdouble> v);
    static ComplexSpectrum from_real(std::vector<double> g, const std::vector<double>& v);

    std::size_t size() const { return grid.size(); }
    std::vector<double> real() const;
    std::vector<double> imag() const;

    // Throws ValidationError if lengths differ, size < 2 or grid not strictly increasing.
    void check() const;
};

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n); // lo, hi are the end values

// Union of sorted grids with near-duplicates (relative 1e-14 of the span) dropped.
std::vector<double> merge_grids(const std::vector<std::vector<double>>& grids);

double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

} // namespace chiralpoint

#endif
