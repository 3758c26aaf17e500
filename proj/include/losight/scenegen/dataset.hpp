#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "losight/core/matrix.hpp"
#include "losight/physics/forward.hpp"
#include "losight/scenegen/profile.hpp"

namespace losight::scenegen {

/// Lower bound applied to jittered mole fractions.
inline constexpr double kMinMoleFraction = 1e-4;

struct LabeledSample {
    physics::Spectrum spectrum;  // after the slit
    std::vector<double> temperatures;
    /// Indexed by physics::Species; metadata only, never a model input.
    std::array<std::vector<double>, physics::kSpeciesCount> mole_fractions;
};

struct SplitAssignment {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
    std::array<double, 3> ratios{0.70, 0.15, 0.15};
    std::uint64_t seed = 0;
};

/// Labeled spectra in matrix form: one row per sample.
struct Dataset {
    physics::SpectralGrid grid;
    physics::SlitConfig slit;
    ProfileConfig profile;
    std::uint64_t seed = 0;
    Matrix spectra;         // samples x grid points
    Matrix temperatures;    // samples x segments
    Matrix mole_fractions;  // samples x (species * segments), species-major
    SplitAssignment split;

    Index samples() const { return spectra.rows(); }
};

physics::GasPath build_path(const ProfileConfig& cfg, std::span<const double> temperatures,
                            const std::array<std::vector<double>, physics::kSpeciesCount>& fractions);

/// One sample drawn from its own seed.
LabeledSample generate_sample(const ProfileConfig& cfg, const physics::SpectralGrid& grid,
                              const physics::SlitConfig& slit, const physics::LineDatabase& db,
                              std::uint64_t sample_seed, const physics::ForwardOptions& options = {});

/// Sample i uses derive_seed(seed, i), so output does not depend on `jobs`.
std::vector<LabeledSample> generate_dataset(const ProfileConfig& cfg, std::size_t n_samples,
                                            const physics::SpectralGrid& grid, const physics::SlitConfig& slit,
                                            const physics::LineDatabase& db, std::uint64_t seed,
                                            unsigned jobs = 1, const physics::ForwardOptions& options = {});

Dataset to_dataset(const std::vector<LabeledSample>& samples, const ProfileConfig& cfg,
                   const physics::SpectralGrid& grid, const physics::SlitConfig& slit, std::uint64_t seed);

SplitAssignment split_dataset(std::size_t n, std::array<double, 3> ratios, std::uint64_t seed);

}  // namespace losight::scenegen
