#include "losight/scenegen/dataset.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "losight/core/error.hpp"
#include "losight/core/parallel.hpp"

namespace losight::scenegen {

using physics::kAllSpecies;
using physics::kSpeciesCount;

physics::GasPath build_path(const ProfileConfig& cfg, std::span<const double> temperatures,
                            const std::array<std::vector<double>, kSpeciesCount>& fractions) {
    const auto n = static_cast<std::size_t>(cfg.n_segments);
    if (temperatures.size() != n) throw UsageError("temperature profile length does not match segment count");
    physics::GasPath path;
    path.segments.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto& seg = path.segments[j];
        seg.length = cfg.total_length / static_cast<double>(n);
        seg.temperature = temperatures[j];
        seg.pressure = cfg.pressure;
        for (std::size_t s = 0; s < kSpeciesCount; ++s) {
            if (fractions[s].size() != n) throw UsageError("mole-fraction profile length does not match segment count");
            seg.mole_fractions[s] = fractions[s][j];
        }
    }
    return path;
}

LabeledSample generate_sample(const ProfileConfig& cfg, const physics::SpectralGrid& grid,
                              const physics::SlitConfig& slit, const physics::LineDatabase& db,
                              std::uint64_t sample_seed, const physics::ForwardOptions& options) {
    const std::vector<double> rho = dual_peak_profile(cfg);
    Rng rng(sample_seed);

    LabeledSample sample;
    sample.temperatures = perturb_profile(scale_profile(rho, cfg.t_min, cfg.t_max), cfg.t_jitter, rng);
    const std::vector<double> x_base = scale_profile(rho, cfg.x_min, cfg.x_max);
    for (std::size_t s = 0; s < kSpeciesCount; ++s) {
        auto x = perturb_profile(x_base, cfg.x_jitter, rng);
        for (double& v : x) v = std::max(v, kMinMoleFraction);
        sample.mole_fractions[s] = std::move(x);
    }
    const physics::GasPath path = build_path(cfg, sample.temperatures, sample.mole_fractions);
    sample.spectrum = physics::apply_slit(physics::radiative_transfer(path, grid, db, options), slit);
    return sample;
}

std::vector<LabeledSample> generate_dataset(const ProfileConfig& cfg, std::size_t n_samples,
                                            const physics::SpectralGrid& grid, const physics::SlitConfig& slit,
                                            const physics::LineDatabase& db, std::uint64_t seed, unsigned jobs,
                                            const physics::ForwardOptions& options) {
    if (n_samples < 1) throw UsageError("generate_dataset needs at least one sample");
    cfg.validate();
    grid.validate();
    slit.validate();
    std::vector<LabeledSample> samples(n_samples);
    parallel_for(n_samples, jobs, [&](std::size_t i) {
        try {
            samples[i] = generate_sample(cfg, grid, slit, db, derive_seed(seed, static_cast<std::uint64_t>(i)), options);
        } catch (const std::exception& e) {
            throw NumericError("sample " + std::to_string(i) + ": " + e.what());
        }
    });
    return samples;
}

Dataset to_dataset(const std::vector<LabeledSample>& samples, const ProfileConfig& cfg,
                   const physics::SpectralGrid& grid, const physics::SlitConfig& slit, std::uint64_t seed) {
    Dataset d;
    d.grid = grid;
    d.slit = slit;
    d.profile = cfg;
    d.seed = seed;
    const auto n = static_cast<Index>(samples.size());
    const auto m = static_cast<Index>(grid.size());
    const Index segs = cfg.n_segments;
    d.spectra.resize(n, m);
    d.temperatures.resize(n, segs);
    d.mole_fractions.resize(n, segs * static_cast<Index>(kSpeciesCount));
    for (Index i = 0; i < n; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        if (static_cast<Index>(s.spectrum.intensity.size()) != m) throw DataError("sample spectrum length mismatch");
        for (Index k = 0; k < m; ++k) d.spectra(i, k) = s.spectrum.intensity[static_cast<std::size_t>(k)];
        for (Index j = 0; j < segs; ++j) {
            d.temperatures(i, j) = s.temperatures[static_cast<std::size_t>(j)];
            for (std::size_t sp = 0; sp < kSpeciesCount; ++sp) {
                d.mole_fractions(i, static_cast<Index>(sp) * segs + j) = s.mole_fractions[sp][static_cast<std::size_t>(j)];
            }
        }
    }
    return d;
}

SplitAssignment split_dataset(std::size_t n, std::array<double, 3> ratios, std::uint64_t seed) {
    if (n < 3) throw UsageError("split_dataset needs at least 3 samples");
    for (double r : ratios) {
        if (!(r > 0.0)) throw UsageError("split ratios must be positive");
    }
    if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9) throw UsageError("split ratios must sum to 1");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(perm.begin(), perm.end());

    const double nn = static_cast<double>(n);
    auto n_train = static_cast<std::size_t>(std::llround(ratios[0] * nn));
    auto n_val = static_cast<std::size_t>(std::llround(ratios[1] * nn));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 2);
    n_val = std::clamp<std::size_t>(n_val, 1, n - n_train - 1);

    SplitAssignment split;
    split.ratios = ratios;
    split.seed = seed;
    split.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.validation.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                            perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    split.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), perm.end());
    return split;
}

}  // namespace losight::scenegen
