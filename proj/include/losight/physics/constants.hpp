#pragma once

namespace losight::physics {

struct PhysicalConstants {
    static constexpr double planck = 6.62607015e-34;        // J s
    static constexpr double speed_of_light = 2.99792458e10;  // cm/s
    static constexpr double speed_of_light_si = 2.99792458e8;  // m/s
    static constexpr double boltzmann = 1.380649e-23;       // J/K
    /// Second radiation constant h c / k_B, cm K.
    static constexpr double c2 = planck * speed_of_light / boltzmann;
    static constexpr double atomic_mass = 1.66053906660e-27;  // kg
    static constexpr double standard_atmosphere = 101325.0;   // Pa
    static constexpr double reference_temperature = 296.0;    // K
};

}  // namespace losight::physics
