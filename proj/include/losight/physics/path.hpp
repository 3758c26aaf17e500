#pragma once

#include <array>
#include <vector>

#include "losight/physics/lines.hpp"

namespace losight::physics {

struct PathSegment {
    double length = 1.0;           // cm
    double temperature = 296.0;    // K
    double pressure = 101325.0;    // Pa
    std::array<double, kSpeciesCount> mole_fractions{};

    double fraction(Species s) const { return mole_fractions[static_cast<int>(s)]; }
    double& fraction(Species s) { return mole_fractions[static_cast<int>(s)]; }

    void validate() const;
};

/// Segments ordered from the far end of the line of sight to the detector.
struct GasPath {
    std::vector<PathSegment> segments;

    double total_length() const;
    GasPath reversed() const;
};

}  // namespace losight::physics
