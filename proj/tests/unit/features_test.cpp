#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "losight/core/error.hpp"
#include "losight/core/random.hpp"
#include "losight/features/group.hpp"
#include "losight/features/pca.hpp"
#include "losight/features/ratio.hpp"
#include "losight/features/representation.hpp"
#include "losight/features/scaler.hpp"
#include "losight/features/statistics.hpp"
#include "losight/features/transform.hpp"
#include "losight/scenegen/dataset.hpp"

using namespace losight;
using namespace losight::features;

namespace {

std::size_t index_of(std::string_view name) {
    const auto& names = statistical_feature_names();
    const auto it = std::find(names.begin(), names.end(), name);
    REQUIRE(it != names.end());
    return static_cast<std::size_t>(it - names.begin());
}

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-3.0, 3.0);
    return v;
}

double pearson_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
        saa += a[i] * a[i];
        sbb += b[i] * b[i];
        sab += a[i] * b[i];
    }
    return (n * sab - sa * sb) / std::sqrt((n * saa - sa * sa) * (n * sbb - sb * sb));
}

// Log spectra of a few generated samples on the default grid.
const std::vector<std::vector<double>>& sample_log_spectra() {
    static const auto spectra = [] {
        std::vector<std::vector<double>> out;
        const auto samples = scenegen::generate_dataset(scenegen::ProfileConfig{}, 3, physics::SpectralGrid{},
                                                        physics::SlitConfig{}, physics::bundled_line_list(), 21, 1);
        for (const auto& s : samples) out.push_back(log_transform(s.spectrum.intensity));
        return out;
    }();
    return spectra;
}

}  // namespace

TEST_CASE("log transform") {
    const double e = std::exp(1.0);
    const auto out = log_transform(std::vector<double>{e, e * e, e * e * e});
    CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(out[2] == doctest::Approx(3.0).epsilon(1e-15));
    const auto floored = log_transform(std::vector<double>{1.0, 0.0, -2.0});
    CHECK(floored[1] == doctest::Approx(-69.0776).epsilon(1e-6));
    CHECK(floored[2] == floored[1]);
    const std::vector<double> in{1e-5, 3.0, 1e-29, 7e4};
    const auto lg = log_transform(in);
    for (std::size_t i = 0; i < in.size(); ++i) CHECK(std::abs(std::exp(lg[i]) - in[i]) <= 1e-14 * in[i]);
}

TEST_CASE("statistical features on degenerate and tiny signals") {
    const std::vector<double> constant(64, 5.0);
    const auto f = statistical_features(constant);
    REQUIRE(f.size() == 38);
    CHECK(f[index_of("mean")] == doctest::Approx(5.0));
    CHECK(f[index_of("std")] == 0.0);
    CHECK(f[index_of("skewness")] == 0.0);
    CHECK(f[index_of("kurtosis")] == 0.0);
    CHECK(f[index_of("peak_to_peak")] == 0.0);
    CHECK(f[index_of("zero_cross")] == 0.0);
    CHECK(std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); }));

    const auto t = time_domain_features(std::vector<double>{1.0, 2.0, 3.0});
    REQUIRE(t.size() == 23);
    CHECK(t[index_of("mean")] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(t[index_of("std")] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(t[index_of("rms")] == doctest::Approx(std::sqrt(14.0 / 3.0)).epsilon(1e-15));
    CHECK(t[index_of("maximum")] == 3.0);
    CHECK(t[index_of("minimum")] == 1.0);
    CHECK(t[index_of("sum_difference")] == doctest::Approx(2.0));

    CHECK_THROWS_AS(statistical_features(std::vector<double>(7, 1.0)), UsageError);
}

TEST_CASE("DFT of a constant signal") {
    const double c = 2.5;
    const std::size_t n = 40;
    const std::vector<double> constant(n, c);
    const auto x = forward_dft(constant);
    CHECK(std::abs(x[0] - std::complex<double>(n * c, 0.0)) < 1e-12);
    for (std::size_t k = 1; k < x.size(); ++k) CHECK(std::abs(x[k]) < 1e-12);

    const auto f = frequency_domain_features(constant);
    const std::size_t base = index_of("fft_mean");
    CHECK(f[index_of("fft_max_magnitude1") - base] == doctest::Approx(n * c));
    for (const char* name : {"fft_max_magnitude2", "fft_max_magnitude6", "fft_min_magnitude"})
        CHECK(std::abs(f[index_of(name) - base]) < 1e-12);
}

TEST_CASE("DFT matches the direct sum") {
    const auto s = random_signal(37, 4);
    const auto x = forward_dft(s);
    REQUIRE(x.size() == s.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j)
            acc += s[j] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(j * k) / static_cast<double>(s.size()));
        worst = std::max(worst, std::abs(acc - x[k]));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("shuffling leaves order-free statistics unchanged") {
    const auto s = random_signal(300, 5);
    auto shuffled = s;
    Rng rng(6);
    rng.shuffle(shuffled.begin(), shuffled.end());
    const auto a = statistical_features(s);
    const auto b = statistical_features(shuffled);
    for (const char* name : {"mean", "maximum", "minimum", "quartile1", "median", "quartile3", "interquartile_range",
                             "std", "variance", "skewness", "kurtosis", "rms", "peak_to_peak", "mean_magnitude",
                             "shannon_entropy", "log_energy_entropy", "crest_factor"}) {
        const std::size_t i = index_of(name);
        CHECK_MESSAGE(std::abs(a[i] - b[i]) <= 1e-10 * std::max(1.0, std::abs(a[i])), name);
    }
    CHECK(a[index_of("rms_diff")] != b[index_of("rms_diff")]);
}

TEST_CASE("band and aggregated features") {
    const physics::SpectralGrid grid;
    const auto& signal = sample_log_spectra()[0];
    CHECK(band_features(signal, grid, default_bands()).size() == 114);
    CHECK(aggregated_features(signal, grid, default_bands()).size() == 152);
    const std::vector<BandDef> whole{{"all", grid.nu_min, grid.nu_max}};
    CHECK(band_features(signal, grid, whole) == statistical_features(signal));
    const std::vector<BandDef> empty{{"none", 2600.0, 2700.0}};
    CHECK_THROWS_AS(band_features(signal, grid, empty), UsageError);
}

TEST_CASE("feature counts at 6799 points") {
    auto count = [](BasisKind kind, int order, int window) {
        return feature_count(6799, BasisSpec{kind, order, window});
    };
    CHECK(count(BasisKind::Polynomial, 3, 20) == 1356);
    CHECK(count(BasisKind::Polynomial, 3, 50) == 540);
    CHECK(count(BasisKind::Polynomial, 2, 20) == 1017);
    CHECK(count(BasisKind::Polynomial, 2, 50) == 405);
    CHECK(count(BasisKind::Polynomial, 1, 20) == 678);
    CHECK(count(BasisKind::Polynomial, 1, 50) == 270);
    CHECK(count(BasisKind::Sinusoidal, 1, 20) == 1356);
    CHECK(count(BasisKind::Sinusoidal, 1, 50) == 540);
    CHECK(count(BasisKind::Exponential, 1, 20) == 1356);
    CHECK(count(BasisKind::Exponential, 1, 50) == 540);
    CHECK(count(BasisKind::Power, 1, 20) == 1017);
    CHECK(count(BasisKind::Power, 1, 50) == 405);
    CHECK(window_count(6799, BasisSpec{BasisKind::Polynomial, 3, 50}) == 135);
    CHECK(feature_count(7000, BasisSpec{BasisKind::Polynomial, 3, 50}) == 560);
    CHECK(feature_count(7001, BasisSpec{BasisKind::Polynomial, 3, 50}) == 560);
}

TEST_CASE("polynomial fits recover planted coefficients") {
    const BasisSpec linear{BasisKind::Polynomial, 1, 50};
    std::vector<double> y(50);
    for (int x = 1; x <= 50; ++x) y[x - 1] = 2.0 + 3.0 * x;
    const auto fit = fit_window(y, linear);
    REQUIRE(fit.coefficients.size() == 2);
    CHECK(std::abs(fit.coefficients[0] - 2.0) < 1e-10);
    CHECK(std::abs(fit.coefficients[1] - 3.0) < 1e-10);

    // Piecewise cubic: a different planted cubic in every window.
    const BasisSpec cubic{BasisKind::Polynomial, 3, 20};
    Rng rng(12);
    const int windows = 9;
    std::vector<double> signal;
    std::vector<double> planted;
    for (int w = 0; w < windows; ++w) {
        const double c[4] = {rng.uniform(-2, 2), rng.uniform(-1, 1), rng.uniform(-0.1, 0.1), rng.uniform(-0.01, 0.01)};
        planted.insert(planted.end(), c, c + 4);
        for (int x = 1; x <= 20; ++x) signal.push_back(c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x);
    }
    signal.push_back(99.0);  // trailing remainder is dropped
    const auto rep = representation_features(signal, cubic);
    REQUIRE(rep.coefficients.size() == planted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < planted.size(); ++i) worst = std::max(worst, std::abs(rep.coefficients[i] - planted[i]));
    CHECK(worst < 1e-6);
    const auto rebuilt = reconstruct(rep, cubic);
    double resid = 0.0;
    for (std::size_t i = 0; i < rebuilt.size(); ++i) resid = std::max(resid, std::abs(rebuilt[i] - signal[i]));
    CHECK(resid < 1e-10);
}

TEST_CASE("sinusoidal fit recovers planted coefficients") {
    const BasisSpec sin50{BasisKind::Sinusoidal, 1, 50};
    std::vector<double> y(50);
    for (int x = 1; x <= 50; ++x) y[x - 1] = 1.0 + 2.0 * std::cos(0.3 * x) + 0.5 * std::sin(0.3 * x);
    const auto fit = fit_window(y, sin50);
    REQUIRE(fit.coefficients.size() == 4);
    CHECK_FALSE(fit.fallback);
    CHECK(std::abs(fit.coefficients[0] - 1.0) < 1e-6);
    CHECK(std::abs(fit.coefficients[1] - 2.0) < 1e-6);
    CHECK(std::abs(fit.coefficients[2] - 0.5) < 1e-6);
    CHECK(std::abs(fit.coefficients[3] - 0.3) < 1e-6);
}

TEST_CASE("exponential and power fits on exact model members") {
    std::vector<double> y(50);
    for (int x = 1; x <= 50; ++x) y[x - 1] = 2.0 * std::exp(-0.01 * x) + std::exp(0.01 * x);
    const auto e = fit_window(y, BasisSpec{BasisKind::Exponential, 1, 50});
    REQUIRE(e.coefficients.size() == 4);
    CHECK_FALSE(e.fallback);
    // The two terms may come back in either order.
    const double b_lo = std::min(e.coefficients[1], e.coefficients[3]);
    const double b_hi = std::max(e.coefficients[1], e.coefficients[3]);
    CHECK(std::abs(b_lo + 0.01) < 1e-6);
    CHECK(std::abs(b_hi - 0.01) < 1e-6);
    const auto ye = evaluate_window(e, BasisSpec{BasisKind::Exponential, 1, 50}, 50);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) worst = std::max(worst, std::abs(ye[i] - y[i]));
    CHECK(worst < 1e-10);

    for (int x = 1; x <= 50; ++x) y[x - 1] = 2.0 * std::pow(x, 0.7) - 1.5;
    const auto p = fit_window(y, BasisSpec{BasisKind::Power, 1, 50});
    REQUIRE(p.coefficients.size() == 3);
    CHECK_FALSE(p.fallback);
    const auto yp = evaluate_window(p, BasisSpec{BasisKind::Power, 1, 50}, 50);
    worst = 0.0;
    for (int i = 0; i < 50; ++i) worst = std::max(worst, std::abs(yp[i] - y[i]));
    CHECK(worst < 1e-6);
}

TEST_CASE("diverging nonlinear fits fall back to a linear fit") {
    // Alternating spikes of enormous magnitude push the exponential model to overflow.
    std::vector<double> y(20);
    for (int i = 0; i < 20; ++i) y[i] = (i % 2 ? 1e300 : -1e300);
    const BasisSpec ex{BasisKind::Exponential, 1, 20};
    const auto rep = representation_features(y, ex);
    CHECK(rep.coefficients.size() == 4);
    CHECK(std::all_of(rep.coefficients.begin(), rep.coefficients.end(), [](double v) { return std::isfinite(v); }));
    if (rep.fallback[0]) CHECK(rep.warnings == 1);
}

TEST_CASE("reconstruction quality") {
    SUBCASE("exact model members") {
        std::vector<double> y(100);
        for (int i = 0; i < 100; ++i) y[i] = 0.5 - 0.01 * (i % 50) + 1e-4 * (i % 50) * (i % 50);
        const auto q = reconstruction_quality(y, BasisSpec{BasisKind::Polynomial, 2, 50});
        CHECK(q.mse < 1e-12);
        CHECK(q.r == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("higher order and shorter windows fit generated spectra better") {
        for (const auto& s : sample_log_spectra()) {
            const auto fine = reconstruction_quality(s, BasisSpec{BasisKind::Polynomial, 3, 20});
            const auto coarse = reconstruction_quality(s, BasisSpec{BasisKind::Polynomial, 1, 50});
            CHECK(fine.mse < coarse.mse);
            CHECK(fine.r > 0.99);
        }
    }
    SUBCASE("reported R equals a direct Pearson evaluation") {
        const auto& s = sample_log_spectra()[1];
        for (BasisSpec b : {BasisSpec{BasisKind::Polynomial, 1, 50}, BasisSpec{BasisKind::Sinusoidal, 1, 50},
                            BasisSpec{BasisKind::Power, 1, 20}}) {
            const auto rep = representation_features(s, b);
            const auto rebuilt = reconstruct(rep, b);
            const std::vector<double> covered(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(rebuilt.size()));
            const auto q = reconstruction_quality(s, b);
            CHECK(std::abs(q.r - pearson_oracle(covered, rebuilt)) < 1e-10);
        }
    }
}

TEST_CASE("intensity ratio features") {
    std::vector<double> sym(80);
    for (int i = 0; i < 40; ++i) sym[i] = sym[79 - i] = 1.0 + i * 0.1;
    const auto r = intensity_ratio_features(sym, 10);
    REQUIRE(r.size() == 4);
    for (double v : r) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    std::vector<double> steps(20, 3.0);
    std::fill(steps.begin() + 10, steps.end(), 1.5);
    const auto two = intensity_ratio_features(steps, 10);
    REQUIRE(two.size() == 1);
    CHECK(two[0] == doctest::Approx(2.0).epsilon(1e-15));

    Rng rng(14);
    std::vector<double> s(1003);
    for (auto& v : s) v = rng.uniform(0.1, 5.0);
    const int w = 20;
    const auto got = intensity_ratio_features(s, w);
    const std::size_t windows = s.size() / w;
    REQUIRE(got.size() == windows / 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < windows / 2; ++i) {
        double a = 0.0, b = 0.0;
        for (int k = 0; k < w; ++k) {
            a += s[i * w + k];
            b += s[(windows - 1 - i) * w + k];
        }
        worst = std::max(worst, std::abs(got[i] - a / b) / (a / b));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("PCA") {
    SUBCASE("rank-one data") {
        Matrix x(10, 2);
        for (int t = 1; t <= 10; ++t) x.row(t - 1) << t, 2.0 * t;
        const PcaModel m = fit_pca(x, false);
        CHECK(std::abs(std::abs(m.components(0, 0)) - 1.0 / std::sqrt(5.0)) < 1e-12);
        CHECK(std::abs(std::abs(m.components(0, 1)) - 2.0 / std::sqrt(5.0)) < 1e-12);
        CHECK(m.variances(1) < 1e-20);
    }
    Rng rng(31);
    Matrix x(60, 8);
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform(-1.0, 1.0) * (j + 1) + (j > 0 ? 0.5 * x(i, j - 1) : 0.0);
    x.col(3).array() += 1000.0;
    const PcaModel m = fit_pca(x);
    SUBCASE("variances match a covariance eigensolver") {
        Matrix z = x.rowwise() - x.colwise().mean();
        for (Index j = 0; j < z.cols(); ++j) z.col(j) /= std::sqrt(z.col(j).squaredNorm() / (z.rows() - 1));
        const Matrix cov = z.transpose() * z / static_cast<double>(z.rows() - 1);
        Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
        const Vector ev = es.eigenvalues().reverse();
        for (Index k = 0; k < ev.size(); ++k) CHECK(std::abs(m.variances(k) - ev(k)) < 1e-8 * ev(0));
        for (Index k = 0; k < ev.size(); ++k) CHECK(std::abs(m.variances(k) - ev(k)) / ev(k) < 1e-8);
    }
    SUBCASE("orthonormal rows and nonincreasing variances") {
        const Matrix g = m.components * m.components.transpose();
        CHECK((g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() < 1e-8);
        for (Index k = 1; k < m.variances.size(); ++k) CHECK(m.variances(k) <= m.variances(k - 1));
    }
    SUBCASE("projected covariance is diagonal and total variance is preserved") {
        const Matrix p = pca_transform(m, x, 8);
        const Matrix c = (p.rowwise() - p.colwise().mean()).transpose() * (p.rowwise() - p.colwise().mean()) / 59.0;
        Matrix off = c;
        off.diagonal().setZero();
        CHECK(off.cwiseAbs().maxCoeff() < 1e-8);
        CHECK(std::abs(c.trace() - 8.0) < 1e-8);
    }
    SUBCASE("full basis inverts") {
        const Matrix back = pca_inverse(m, pca_transform(m, x, 8));
        CHECK((back - x).norm() / x.norm() < 1e-8);
    }
    SUBCASE("component count limits") {
        CHECK_THROWS_AS(pca_transform(m, x, 9), UsageError);
        CHECK_THROWS_AS(pca_transform(m, x, 0), UsageError);
        CHECK(pca_transform(m, x, 3).cols() == 3);
        CHECK_THROWS_AS(fit_pca(x.topRows(1)), UsageError);
    }
    SUBCASE("degenerate columns are zeroed") {
        Matrix y = x;
        y.col(2).setConstant(4.0);
        const PcaModel d = fit_pca(y);
        CHECK(d.scale(2) == 0.0);
        CHECK(pca_transform(d, y, 8).allFinite());
    }
    CHECK(pca_k_grid(540) == std::vector<Index>{100, 200, 300, 400, 500, 540});
    CHECK(pca_k_grid(300) == std::vector<Index>{100, 200, 300});
    CHECK(pca_k_grid(38) == std::vector<Index>{38});
}

TEST_CASE("min-max scaler") {
    Matrix c(2, 1);
    c << 0.0, 10.0;
    const ScalerModel s = fit_scaler(c, -1.0, 1.0);
    const Matrix out = s.apply(c);
    CHECK(out(0, 0) == -1.0);
    CHECK(out(1, 0) == 1.0);

    Matrix k(3, 2);
    k << 4.0, 1.0, 4.0, 2.0, 4.0, 3.0;
    const Matrix ko = fit_scaler(k, -1.0, 1.0).apply(k);
    CHECK(ko.col(0).isZero(0.0));

    Rng rng(2);
    Matrix r(30, 5);
    for (Index i = 0; i < r.size(); ++i) r.data()[i] = rng.uniform(-100.0, 900.0);
    const ScalerModel t = fit_scaler(r, 0.0, 1.0);
    const Matrix back = t.invert(t.apply(r));
    CHECK((back - r).cwiseAbs().maxCoeff() < 1e-12 * r.cwiseAbs().maxCoeff());
    CHECK(t.apply(r).minCoeff() >= 0.0);
    CHECK(t.apply(r).maxCoeff() <= 1.0);
}

TEST_CASE("feature group descriptors") {
    const FeatureGroup g = group_from_json(nlohmann::json::parse(
        R"({"transform":"log","extractor":"polynomial","order":2,"window_len":20,"pca_k":100})"));
    CHECK(g.extractor == Extractor::Polynomial);
    CHECK(g.order == 2);
    CHECK(g.window_len == 20);
    CHECK(g.pca_k == 100);
    CHECK(group_from_json(group_to_json(g)).label() == g.label());
    const FeatureGroup ratio = group_from_json(nlohmann::json::parse(R"({"extractor":"intensity_ratio"})"));
    CHECK(ratio.transform == "none");
    CHECK(ratio.window_len == 20);
    CHECK_FALSE(ratio.pca_k.has_value());
    CHECK_THROWS_AS(group_from_json(nlohmann::json::parse(R"({"extractor":"wavelet"})")), UsageError);
    CHECK_THROWS_AS(group_from_json(nlohmann::json::parse(R"({"transform":"sqrt"})")), UsageError);
    for (auto e : {Extractor::Polynomial, Extractor::Sinusoidal, Extractor::Exponential, Extractor::Power,
                   Extractor::StatsWhole, Extractor::StatsBands, Extractor::StatsAgg, Extractor::IntensityRatio})
        CHECK(parse_extractor(extractor_name(e)) == e);
}

TEST_CASE("featurizers are deterministic and sized as described") {
    const physics::SpectralGrid grid;
    const auto samples = scenegen::generate_dataset(scenegen::ProfileConfig{}, 4, grid, physics::SlitConfig{},
                                                    physics::bundled_line_list(), 77, 1);
    Matrix spectra(4, static_cast<Index>(grid.size()));
    for (Index i = 0; i < 4; ++i)
        spectra.row(i) = Eigen::Map<const RowVector>(samples[i].spectrum.intensity.data(), spectra.cols());

    struct Case {
        FeatureGroup group;
        Index width;
    };
    FeatureGroup poly;
    FeatureGroup stats_agg;
    stats_agg.extractor = Extractor::StatsAgg;
    FeatureGroup stats_bands;
    stats_bands.extractor = Extractor::StatsBands;
    FeatureGroup sinus;
    sinus.extractor = Extractor::Sinusoidal;
    FeatureGroup ratio = group_from_json(nlohmann::json::parse(R"({"extractor":"intensity_ratio","window_len":10})"));
    for (const Case& c : {Case{poly, 560}, Case{stats_agg, 152}, Case{stats_bands, 114}, Case{sinus, 560},
                          Case{ratio, 350}}) {
        const Matrix a = extract_raw_features(spectra, grid, c.group, 1);
        const Matrix b = extract_raw_features(spectra, grid, c.group, 3);
        CHECK(a.cols() == c.width);
        CHECK(a == b);
        CHECK(a.allFinite());
    }
}

TEST_CASE("feature transform fits on training rows only") {
    Rng rng(40);
    Matrix raw(20, 12);
    for (Index i = 0; i < raw.size(); ++i) raw.data()[i] = rng.uniform(-5.0, 5.0);
    const std::vector<std::size_t> train{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    const FeatureTransform t = fit_feature_transform(raw, train, 5);
    const Matrix out = apply_feature_transform(t, raw);
    CHECK(out.cols() == 5);
    Matrix train_out(12, 5);
    for (Index i = 0; i < 12; ++i) train_out.row(i) = out.row(i);
    CHECK(train_out.minCoeff() == doctest::Approx(-1.0));
    CHECK(train_out.maxCoeff() == doctest::Approx(1.0));
    Matrix changed = raw;
    changed.row(15).setConstant(1e6);
    CHECK(apply_feature_transform(fit_feature_transform(changed, train, 5), raw) == out);
    CHECK_THROWS_AS(fit_feature_transform(raw, train, 13), UsageError);

    const FeatureTransform round = transform_from_json(transform_to_json(t));
    CHECK(apply_feature_transform(round, raw) == out);
    const FeatureTransform three = with_pca_k(t, raw, train, 3);
    CHECK(apply_feature_transform(three, raw).cols() == 3);
}
