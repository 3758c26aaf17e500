#include "losight/physics/spectrum.hpp"

#include <cmath>
#include <string>

#include "losight/core/error.hpp"
#include "losight/physics/path.hpp"

namespace losight::physics {

std::size_t SpectralGrid::size() const {
    const double q = (nu_max - nu_min) / step;
    return static_cast<std::size_t>(std::floor(q * (1.0 + 1e-12) + 1e-9)) + 1;
}

void SpectralGrid::validate() const {
    if (!(nu_min < nu_max)) throw DomainError("spectral grid requires nu_min < nu_max");
    if (!(step > 0.0)) throw DomainError("spectral grid requires step > 0");
    if (!(nu_min > 0.0)) throw DomainError("spectral grid requires positive wavenumbers");
}

std::pair<std::size_t, std::size_t> SpectralGrid::index_range(double lo, double hi) const {
    const std::size_t n = size();
    const double tol = 1e-9 * step;
    double first = std::ceil((lo - nu_min - tol) / step);
    double last = std::floor((hi - nu_min + tol) / step);
    first = std::max(first, 0.0);
    last = std::min(last, static_cast<double>(n) - 1.0);
    if (last < first) return {0, 0};
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(last) + 1};
}

void PathSegment::validate() const {
    if (!(length > 0.0)) throw DomainError("segment length must be positive");
    if (!(temperature > 0.0)) throw DomainError("segment temperature must be positive");
    if (!(pressure > 0.0)) throw DomainError("segment pressure must be positive");
    double sum = 0.0;
    for (double x : mole_fractions) {
        if (!(x >= 0.0 && x <= 1.0)) throw DomainError("mole fraction outside [0, 1]");
        sum += x;
    }
    if (sum > 1.0 + 1e-12) throw DomainError("mole fractions sum above 1");
}

double GasPath::total_length() const {
    double total = 0.0;
    for (const auto& s : segments) total += s.length;
    return total;
}

GasPath GasPath::reversed() const {
    GasPath out;
    out.segments.assign(segments.rbegin(), segments.rend());
    return out;
}

}  // namespace losight::physics
