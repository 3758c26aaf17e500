#include "losight/physics/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "losight/core/error.hpp"
#include "losight/physics/constants.hpp"

namespace losight::physics {

namespace {

using PC = PhysicalConstants;

constexpr double kLn2 = std::numbers::ln2;
const double kSqrtLn2 = std::sqrt(kLn2);
const double kSqrtLn2OverPi = std::sqrt(kLn2 / std::numbers::pi);

}  // namespace

double planck_radiance(double nu, double temperature) {
    if (!(nu > 0.0) || !(temperature > 0.0)) {
        throw DomainError("planck_radiance requires positive wavenumber and temperature");
    }
    const double numerator = 2.0 * PC::planck * PC::speed_of_light * PC::speed_of_light * nu * nu * nu;
    return numerator / std::expm1(PC::c2 * nu / temperature);
}

double PartitionExponents::operator()(Species s) const {
    switch (s) {
        case Species::CO: return co;
        case Species::CO2: return co2;
        case Species::H2O: return h2o;
    }
    return 1.0;
}

double line_intensity_at_T(const LineRecord& line, double temperature, const PartitionExponents& beta) {
    if (!(temperature > 0.0)) throw DomainError("line intensity requires T > 0");
    constexpr double t_ref = PC::reference_temperature;
    if (temperature == t_ref) return line.s_ref;
    const double partition_ratio = std::pow(t_ref / temperature, beta(line.species));
    const double boltzmann = std::exp(-PC::c2 * line.e_lower * (1.0 / temperature - 1.0 / t_ref));
    const double stimulated = std::expm1(-PC::c2 * line.nu0 / temperature) /
                              std::expm1(-PC::c2 * line.nu0 / t_ref);
    return line.s_ref * partition_ratio * boltzmann * stimulated;
}

LineWidths line_widths(const LineRecord& line, double temperature, double pressure) {
    LineWidths w;
    w.doppler = line.nu0 / PC::speed_of_light_si *
                std::sqrt(2.0 * kLn2 * PC::boltzmann * temperature / molecular_mass(line.species));
    w.lorentz = line.gamma_air * (pressure / PC::standard_atmosphere) *
                std::pow(PC::reference_temperature / temperature, line.n_air);
    return w;
}

std::complex<double> humlicek_w4(double x, double y) {
    using C = std::complex<double>;
    const C t(y, -x);
    const double s = std::abs(x) + y;
    if (s >= 15.0) {
        return t * 0.5641896 / (0.5 + t * t);
    }
    if (s >= 5.5) {
        const C u = t * t;
        return t * (1.410474 + u * 0.5641896) / (0.75 + u * (3.0 + u));
    }
    if (y >= 0.195 * std::abs(x) - 0.176) {
        return (16.4955 + t * (20.20933 + t * (11.96482 + t * (3.778987 + t * 0.5642236)))) /
               (16.4955 + t * (38.82363 + t * (39.27121 + t * (21.69274 + t * (6.699398 + t)))));
    }
    const C u = t * t;
    const C num = t * (36183.31 - u * (3321.9905 - u * (1540.787 - u * (219.0313 - u * (35.76683 -
                  u * (1.320522 - u * 0.56419))))));
    const C den = 32066.6 - u * (24322.84 - u * (9022.228 - u * (2186.181 - u * (364.2191 -
                  u * (61.57037 - u * (1.841439 - u))))));
    return std::exp(u) - num / den;
}

double voigt_profile(double detuning, const LineWidths& widths) {
    const double scale = kSqrtLn2 / widths.doppler;
    const double w = humlicek_w4(scale * detuning, scale * widths.lorentz).real();
    return std::max(0.0, kSqrtLn2OverPi / widths.doppler * w);
}

double voigt_value(double nu, const LineRecord& line, double temperature, double pressure) {
    if (!(temperature > 0.0) || !(pressure > 0.0)) throw DomainError("voigt_value requires T > 0 and p > 0");
    return voigt_profile(nu - line.nu0, line_widths(line, temperature, pressure));
}

double number_density(double pressure, double mole_fraction, double temperature) {
    // SI m^-3 to cm^-3.
    return pressure * mole_fraction / (PC::boltzmann * temperature) / 1e6;
}

std::vector<double> absorption_coefficient(const SpectralGrid& grid, const PathSegment& segment,
                                           const LineDatabase& db, const ForwardOptions& options) {
    grid.validate();
    segment.validate();
    if (db.empty()) throw UsageError("absorption_coefficient requires a nonempty line database");

    const std::size_t n = grid.size();
    std::vector<double> k(n, 0.0);
    const double cutoff = options.wing_cutoff;
    const double t = segment.temperature;
    const double p = segment.pressure;

    for (auto it = db.lower_bound(grid.nu_min - cutoff); it != db.lines().end(); ++it) {
        const LineRecord& line = *it;
        if (line.nu0 > grid.nu_max + cutoff) break;
        const double x = segment.fraction(line.species);
        if (x == 0.0) continue;

        const double amplitude = line_intensity_at_T(line, t, options.partition) * number_density(p, x, t);
        const LineWidths widths = line_widths(line, t, p);
        const double scale = kSqrtLn2 / widths.doppler;
        const double y = scale * widths.lorentz;
        const double peak = amplitude * kSqrtLn2OverPi / widths.doppler;

        const auto [first, last] = grid.index_range(line.nu0 - cutoff, line.nu0 + cutoff);
        for (std::size_t i = first; i < last; ++i) {
            const double w = humlicek_w4(scale * (grid.at(i) - line.nu0), y).real();
            if (w > 0.0) k[i] += peak * w;
        }
    }
    return k;
}

void transfer_segment(std::vector<double>& radiance, const std::vector<double>& absorption, double length,
                      double temperature, const SpectralGrid& grid) {
    for (std::size_t i = 0; i < radiance.size(); ++i) {
        const double tau = absorption[i] * length;
        if (tau == 0.0) continue;
        const double emissivity = -std::expm1(-tau);
        radiance[i] = emissivity * planck_radiance(grid.at(i), temperature) + (1.0 - emissivity) * radiance[i];
    }
}

Spectrum radiative_transfer(const GasPath& path, const SpectralGrid& grid, const LineDatabase& db,
                            const ForwardOptions& options) {
    if (path.segments.empty()) throw UsageError("radiative_transfer requires at least one segment");
    grid.validate();
    Spectrum out;
    out.grid = grid;
    out.intensity.assign(grid.size(), 0.0);
    for (const PathSegment& segment : path.segments) {
        const std::vector<double> k = absorption_coefficient(grid, segment, db, options);
        transfer_segment(out.intensity, k, segment.length, segment.temperature, grid);
    }
    return out;
}

void SlitConfig::validate() const {
    if (!(wing > 0.0)) throw DomainError("slit wing must be positive");
}

std::vector<double> slit_kernel(double step, double wing) {
    if (!(step > 0.0) || !(wing > 0.0)) throw DomainError("slit kernel requires positive step and wing");
    if (step > wing * (1.0 + 1e-12)) throw DomainError("slit wing must be at least one grid step");
    const auto half = static_cast<long>(std::floor(wing / step * (1.0 + 1e-12)));
    std::vector<double> weights(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (long k = -half; k <= half; ++k) {
        const double w = std::max(0.0, 1.0 - std::abs(static_cast<double>(k)) * step / wing);
        weights[static_cast<std::size_t>(k + half)] = w;
        sum += w;
    }
    for (double& w : weights) w /= sum;
    return weights;
}

Spectrum apply_slit(const Spectrum& spectrum, const SlitConfig& slit) {
    slit.validate();
    const std::vector<double> kernel = slit_kernel(spectrum.grid.step, slit.wing);
    const auto half = static_cast<long>(kernel.size() / 2);
    const auto n = static_cast<long>(spectrum.intensity.size());

    Spectrum out;
    out.grid = spectrum.grid;
    out.intensity.resize(spectrum.intensity.size());
    for (long i = 0; i < n; ++i) {
        const long lo = std::max(-half, -i);
        const long hi = std::min(half, n - 1 - i);
        double acc = 0.0;
        double norm = 0.0;
        for (long k = lo; k <= hi; ++k) {
            const double w = kernel[static_cast<std::size_t>(k + half)];
            acc += w * spectrum.intensity[static_cast<std::size_t>(i + k)];
            norm += w;
        }
        out.intensity[static_cast<std::size_t>(i)] = acc / norm;
    }
    return out;
}

}  // namespace losight::physics
