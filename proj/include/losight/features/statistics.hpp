#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "losight/physics/spectrum.hpp"

namespace losight::features {

inline constexpr std::size_t kTimeDomainCount = 23;
inline constexpr std::size_t kFrequencyDomainCount = 15;
inline constexpr std::size_t kStatisticalCount = kTimeDomainCount + kFrequencyDomainCount;

/// Output order of statistical_features.
const std::array<std::string_view, kStatisticalCount>& statistical_feature_names();

/// The 23 time-domain features. Accepts any length >= 2.
std::vector<double> time_domain_features(std::span<const double> signal);

/// The 15 frequency-domain features computed from the unnormalized forward DFT.
std::vector<double> frequency_domain_features(std::span<const double> signal);

/// Time-domain followed by frequency-domain features. Requires length >= 8.
std::vector<double> statistical_features(std::span<const double> signal);

/// Unnormalized forward DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
std::vector<std::complex<double>> forward_dft(std::span<const double> signal);

struct BandDef {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

/// H2O (1800, 1890), CO (2100, 2190), CO2 (2310, 2400).
std::vector<BandDef> default_bands();

/// statistical_features on each band slice, concatenated in band order.
std::vector<double> band_features(std::span<const double> signal, const physics::SpectralGrid& grid,
                                  const std::vector<BandDef>& bands);

/// Whole-signal statistics followed by band_features.
std::vector<double> aggregated_features(std::span<const double> signal, const physics::SpectralGrid& grid,
                                        const std::vector<BandDef>& bands);

}  // namespace losight::features
