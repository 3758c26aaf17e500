#include "losight/features/statistics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "losight/core/error.hpp"

namespace losight::features {

const std::array<std::string_view, kStatisticalCount>& statistical_feature_names() {
    static const std::array<std::string_view, kStatisticalCount> names{
        "mean", "maximum", "minimum", "quartile1", "median", "quartile3", "interquartile_range",
        "std", "variance", "skewness", "kurtosis", "inverse_cv", "peak_to_peak", "zero_cross",
        "rms", "crest_factor", "rms_diff", "rms_diff_reciprocal", "mean_magnitude",
        "difference_variance", "sum_difference", "shannon_entropy", "log_energy_entropy",
        "fft_mean", "fft_mean_magnitude", "fft_mean_power", "fft_max_power", "fft_min_power",
        "fft_shannon_entropy", "fft_log_energy_entropy", "fft_max_magnitude1", "fft_max_magnitude2",
        "fft_max_magnitude3", "fft_max_magnitude4", "fft_max_magnitude5", "fft_max_magnitude6",
        "fft_min_magnitude", "fft_mean_phase"};
    return names;
}

namespace {

// x^2 log x^2 with 0 log 0 = 0.
double entropy_term(double sq) { return sq > 0.0 ? sq * std::log(sq) : 0.0; }
double log_or_zero(double sq) { return sq > 0.0 ? std::log(sq) : 0.0; }

}  // namespace

std::vector<double> time_domain_features(std::span<const double> signal) {
    const std::size_t n = signal.size();
    if (n < 2) throw UsageError("time-domain features need at least 2 samples");
    const double nn = static_cast<double>(n);

    double sum = 0.0, sum_sq = 0.0, sum_abs = 0.0;
    double shannon = 0.0, log_energy = 0.0;
    for (double v : signal) {
        sum += v;
        sum_sq += v * v;
        sum_abs += std::abs(v);
        shannon -= entropy_term(v * v);
        log_energy += log_or_zero(v * v);
    }
    const double mean = sum / nn;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : signal) {
        const double d = v - mean;
        m2 += d * d;
    }
    const double variance = m2 / nn;
    const double std_dev = std::sqrt(variance);
    double skewness = 0.0, kurtosis = 0.0;
    if (std_dev > 0.0) {
        for (double v : signal) {
            const double z = (v - mean) / std_dev;
            m3 += z * z * z;
            m4 += z * z * z * z;
        }
        skewness = m3 / nn;
        kurtosis = m4 / nn;
    }

    std::vector<double> sorted(signal.begin(), signal.end());
    std::sort(sorted.begin(), sorted.end());
    auto quartile = [&](double q) { return sorted[static_cast<std::size_t>(std::floor(q * nn))]; };
    const double q1 = quartile(0.25), q2 = quartile(0.5), q3 = quartile(0.75);
    const double vmax = sorted.back(), vmin = sorted.front();

    // Sign changes of the mean-subtracted signal; exact zeros carry no sign.
    double zero_cross = 0.0;
    int last_sign = 0;
    for (double v : signal) {
        const double d = v - mean;
        const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) zero_cross += 1.0;
        last_sign = sign;
    }

    double diff_sq = 0.0, diff_recip = 0.0, diff_abs = 0.0, diff_sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = signal[i + 1] - signal[i];
        diff_sq += d * d;
        diff_recip += 1.0 / std::max(d * d, 1e-24);
        diff_abs += std::abs(d);
        diff_sum += d;
    }
    const double rms = std::sqrt(sum_sq / nn);

    return {mean,
            vmax,
            vmin,
            q1,
            q2,
            q3,
            q3 - q1,
            std_dev,
            variance,
            skewness,
            kurtosis,
            std_dev > 0.0 ? mean / std_dev : 0.0,
            vmax - vmin,
            zero_cross,
            rms,
            rms > 0.0 ? vmax / rms : 0.0,
            std::sqrt(diff_sq / (nn - 1.0)),
            std::sqrt(diff_recip / (nn - 1.0)),
            sum_abs / nn,
            diff_abs / (nn - 1.0),
            diff_sum,
            shannon,
            log_energy};
}

namespace {

// FFTW planning is not thread-safe; plans are cached per length and executed
// through the new-array interface on fftw_malloc'd (identically aligned)
// buffers.
class DftPlanCache {
public:
    ~DftPlanCache() {
        for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int n) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(n); it != plans_.end()) return it->second;
        auto* in = fftw_alloc_complex(static_cast<std::size_t>(n));
        auto* out = fftw_alloc_complex(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(n, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<int, fftw_plan> plans_;
};

DftPlanCache& plan_cache() {
    static DftPlanCache cache;
    return cache;
}

struct FftwDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

std::vector<std::complex<double>> forward_dft(std::span<const double> signal) {
    const int n = static_cast<int>(signal.size());
    if (n == 0) return {};
    fftw_plan plan = plan_cache().get(n);
    std::unique_ptr<fftw_complex, FftwDeleter> in(fftw_alloc_complex(static_cast<std::size_t>(n)));
    std::unique_ptr<fftw_complex, FftwDeleter> out(fftw_alloc_complex(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        in.get()[i][0] = signal[static_cast<std::size_t>(i)];
        in.get()[i][1] = 0.0;
    }
    fftw_execute_dft(plan, in.get(), out.get());
    std::vector<std::complex<double>> result(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) result[static_cast<std::size_t>(i)] = {out.get()[i][0], out.get()[i][1]};
    return result;
}

std::vector<double> frequency_domain_features(std::span<const double> signal) {
    const auto spectrum = forward_dft(signal);
    const std::size_t n = spectrum.size();
    if (n == 0) throw UsageError("frequency-domain features need a nonempty signal");
    const double nn = static_cast<double>(n);

    double sum_re = 0.0, sum_mag = 0.0, sum_pow = 0.0, sum_phase = 0.0;
    double max_pow = 0.0, min_pow = std::numeric_limits<double>::infinity();
    double shannon = 0.0, log_energy = 0.0;
    std::vector<double> magnitudes(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& x = spectrum[k];
        const double mag = std::abs(x);
        const double pow = std::norm(x);
        double phase = std::atan2(x.imag(), x.real());
        if (phase <= -std::numbers::pi) phase = std::numbers::pi;
        magnitudes[k] = mag;
        sum_re += x.real();
        sum_mag += mag;
        sum_pow += pow;
        sum_phase += phase;
        max_pow = std::max(max_pow, pow);
        min_pow = std::min(min_pow, pow);
        shannon -= entropy_term(pow);
        log_energy += log_or_zero(pow);
    }
    const std::size_t top = std::min<std::size_t>(6, n);
    std::partial_sort(magnitudes.begin(), magnitudes.begin() + static_cast<std::ptrdiff_t>(top), magnitudes.end(),
                      std::greater<>());
    const double min_mag = *std::min_element(magnitudes.begin() + static_cast<std::ptrdiff_t>(top - 1), magnitudes.end());

    std::vector<double> out{sum_re / nn, sum_mag / nn, sum_pow / nn, max_pow, min_pow, shannon, log_energy};
    for (std::size_t i = 0; i < 6; ++i) out.push_back(i < top ? magnitudes[i] : 0.0);
    out.push_back(min_mag);
    out.push_back(sum_phase / nn);
    return out;
}

std::vector<double> statistical_features(std::span<const double> signal) {
    if (signal.size() < 8) throw UsageError("statistical features need at least 8 samples");
    std::vector<double> out = time_domain_features(signal);
    const std::vector<double> freq = frequency_domain_features(signal);
    out.insert(out.end(), freq.begin(), freq.end());
    return out;
}

std::vector<BandDef> default_bands() {
    return {{"H2O", 1800.0, 1890.0}, {"CO", 2100.0, 2190.0}, {"CO2", 2310.0, 2400.0}};
}

std::vector<double> band_features(std::span<const double> signal, const physics::SpectralGrid& grid,
                                  const std::vector<BandDef>& bands) {
    if (signal.size() != grid.size()) throw UsageError("signal length does not match the spectral grid");
    std::vector<double> out;
    out.reserve(bands.size() * kStatisticalCount);
    for (const BandDef& band : bands) {
        if (!(band.lo < band.hi)) throw UsageError("band " + band.name + " requires lo < hi");
        if (band.lo < grid.nu_min - 1e-9 || band.hi > grid.at(grid.size() - 1) + 1e-9) {
            throw UsageError("band " + band.name + " lies outside the spectral grid");
        }
        const auto [first, last] = grid.index_range(band.lo, band.hi);
        if (last <= first) throw UsageError("band " + band.name + " selects no grid points");
        const auto f = statistical_features(signal.subspan(first, last - first));
        out.insert(out.end(), f.begin(), f.end());
    }
    return out;
}

std::vector<double> aggregated_features(std::span<const double> signal, const physics::SpectralGrid& grid,
                                        const std::vector<BandDef>& bands) {
    std::vector<double> out = statistical_features(signal);
    const auto b = band_features(signal, grid, bands);
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace losight::features
