#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "losight/core/random.hpp"

namespace losight::scenegen {

enum class ProfileVariant {
    /// Both Gaussians centered at j = n, as the density formula is written.
    Literal,
    /// Gaussians centered at n/4 and 3n/4 with the same widths.
    TwoCenter,
};

std::string_view variant_name(ProfileVariant v);
ProfileVariant parse_variant(std::string_view name);

struct ProfileConfig {
    int n_segments = 11;
    double sigma = 16.0;
    double t_min = 1500.0;
    double t_max = 3100.0;
    double x_min = 0.095;
    double x_max = 0.15;
    double t_jitter = 300.0;
    double x_jitter = 0.015;
    ProfileVariant variant = ProfileVariant::Literal;
    double total_length = 10.0;   // cm
    double pressure = 101325.0;   // Pa

    void validate() const;
};

/// Unnormalized dual-peak Gaussian density for j = 1..n.
std::vector<double> dual_peak_density(int n, double sigma, ProfileVariant variant);

/// Density min-max normalized to [0, 1].
std::vector<double> dual_peak_profile(const ProfileConfig& cfg);

std::vector<double> scale_profile(std::span<const double> rho_norm, double lo, double hi);

/// Adds an independent uniform draw from [-delta, delta] to every entry.
std::vector<double> perturb_profile(std::span<const double> values, double delta, Rng& rng);

}  // namespace losight::scenegen
