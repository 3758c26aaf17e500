#include "losight/scenegen/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "losight/core/error.hpp"

namespace losight::scenegen {

std::string_view variant_name(ProfileVariant v) {
    return v == ProfileVariant::Literal ? "literal_eq9" : "two_center";
}

ProfileVariant parse_variant(std::string_view name) {
    if (name == "literal_eq9" || name == "literal") return ProfileVariant::Literal;
    if (name == "two_center") return ProfileVariant::TwoCenter;
    throw UsageError("unknown profile variant '" + std::string(name) + "'");
}

void ProfileConfig::validate() const {
    if (n_segments < 2) throw UsageError("profile needs at least 2 segments");
    if (!(sigma > 0.0)) throw UsageError("profile spread must be positive");
    if (!(t_min < t_max)) throw UsageError("profile requires t_min < t_max");
    if (!(x_min < x_max)) throw UsageError("profile requires x_min < x_max");
    if (!(t_jitter >= 0.0) || !(x_jitter >= 0.0)) throw UsageError("profile jitters must be nonnegative");
    if (!(t_min - t_jitter > 0.0)) throw UsageError("jittered temperature range must stay positive");
    if (!(total_length > 0.0) || !(pressure > 0.0)) throw UsageError("path length and pressure must be positive");
}

std::vector<double> dual_peak_density(int n, double sigma, ProfileVariant variant) {
    const double nn = static_cast<double>(n);
    const double c1 = variant == ProfileVariant::Literal ? nn : nn / 4.0;
    const double c2 = variant == ProfileVariant::Literal ? nn : 3.0 * nn / 4.0;
    std::vector<double> rho(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        const double a = (j - c1) / (4.0 * sigma);
        const double b = 3.0 * (j - c2) / (4.0 * sigma);
        rho[static_cast<std::size_t>(j - 1)] = std::exp(-nn * a * a) + std::exp(-nn * b * b);
    }
    return rho;
}

std::vector<double> dual_peak_profile(const ProfileConfig& cfg) {
    cfg.validate();
    std::vector<double> rho = dual_peak_density(cfg.n_segments, cfg.sigma, cfg.variant);
    const auto [lo_it, hi_it] = std::minmax_element(rho.begin(), rho.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;
    for (double& r : rho) r = span > 0.0 ? (r - lo) / span : 0.0;
    return rho;
}

std::vector<double> scale_profile(std::span<const double> rho_norm, double lo, double hi) {
    if (!(lo < hi)) throw UsageError("scale_profile requires lo < hi");
    std::vector<double> out(rho_norm.size());
    for (std::size_t j = 0; j < rho_norm.size(); ++j) out[j] = rho_norm[j] * (hi - lo) + lo;
    return out;
}

std::vector<double> perturb_profile(std::span<const double> values, double delta, Rng& rng) {
    if (!(delta >= 0.0)) throw UsageError("perturbation range must be nonnegative");
    std::vector<double> out(values.begin(), values.end());
    if (delta == 0.0) return out;
    for (double& v : out) v += rng.uniform(-delta, delta);
    return out;
}

}  // namespace losight::scenegen
