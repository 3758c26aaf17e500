#pragma once

#include <cstddef>
#include <vector>

namespace losight::physics {

struct SpectralGrid {
    double nu_min = 1800.0;
    double nu_max = 2500.0;
    double step = 0.1;

    /// floor((nu_max - nu_min) / step) + 1, with a relative guard against
    /// the quotient landing just below an integer.
    std::size_t size() const;
    double at(std::size_t i) const { return nu_min + static_cast<double>(i) * step; }
    void validate() const;

    /// Index range [first, last) of grid points with lo <= nu <= hi.
    std::pair<std::size_t, std::size_t> index_range(double lo, double hi) const;

    bool operator==(const SpectralGrid&) const = default;
};

struct Spectrum {
    SpectralGrid grid;
    std::vector<double> intensity;  // W cm^-2 sr^-1 / cm^-1
};

}  // namespace losight::physics
