#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "losight/core/error.hpp"
#include "losight/core/random.hpp"
#include "losight/physics/constants.hpp"
#include "losight/physics/forward.hpp"
#include "losight/scenegen/dataset.hpp"

using namespace losight;
using namespace losight::physics;
using PC = PhysicalConstants;
using big = boost::multiprecision::cpp_dec_float_50;

namespace {

big big_h() { return big("6.62607015e-34"); }
big big_c() { return big("2.99792458e10"); }
big big_k() { return big("1.380649e-23"); }
big big_c2() { return big_h() * big_c() / big_k(); }

double planck_oracle(double nu, double t) {
    const big n(nu), temp(t);
    const big num = 2 * big_h() * big_c() * big_c() * n * n * n;
    return static_cast<double>(num / (exp(big_c2() * n / temp) - 1));
}

double intensity_oracle(const LineRecord& l, double t, double beta) {
    const big temp(t), tref(296), c2 = big_c2();
    const big q = pow(tref / temp, big(beta));
    const big boltz = exp(-c2 * big(l.e_lower) * (1 / temp - 1 / tref));
    const big stim = (1 - exp(-c2 * big(l.nu0) / temp)) / (1 - exp(-c2 * big(l.nu0) / tref));
    return static_cast<double>(big(l.s_ref) * q * boltz * stim);
}

// Voigt function K(x, y) = y/pi * integral exp(-t^2) / ((x - t)^2 + y^2) dt.
double voigt_k_oracle(double x, double y) {
    auto f = [&](double t) { return std::exp(-t * t) / ((x - t) * (x - t) + y * y); };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double lo = -12.0, hi = 12.0;
    // Split at the Lorentz peak so the integrand is resolved for small y.
    double sum = 0.0;
    const double mid = std::clamp(x, lo, hi);
    if (mid > lo) sum += ts.integrate(f, lo, mid);
    if (mid < hi) sum += ts.integrate(f, mid, hi);
    return y / M_PI * sum;
}

LineRecord co_line() {
    for (const auto& l : bundled_line_list().lines())
        if (l.species == Species::CO && l.nu0 > 2140.0) return l;
    FAIL("no CO line in the bundled list");
    return {};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

PathSegment seg(double length, double t, double x_co, double x_co2, double x_h2o) {
    PathSegment s;
    s.length = length;
    s.temperature = t;
    s.pressure = PC::standard_atmosphere;
    s.fraction(Species::CO) = x_co;
    s.fraction(Species::CO2) = x_co2;
    s.fraction(Species::H2O) = x_h2o;
    return s;
}

GasPath random_path(Rng& rng, int n) {
    GasPath p;
    for (int i = 0; i < n; ++i)
        p.segments.push_back(seg(10.0 / n, rng.uniform(1200.0, 3400.0), rng.uniform(0.08, 0.165),
                                 rng.uniform(0.08, 0.165), rng.uniform(0.08, 0.165)));
    return p;
}

}  // namespace

TEST_CASE("second radiation constant equals h c / k") {
    CHECK(rel(PC::c2, static_cast<double>(big_c2())) < 1e-12);
    CHECK(PC::c2 == doctest::Approx(1.4387769).epsilon(1e-7));
}

TEST_CASE("planck radiance matches 50-digit evaluation") {
    for (double nu : {1800.0, 2000.0, 2143.27, 2500.0})
        for (double t : {300.0, 1500.0, 2000.0, 3100.0}) CHECK(rel(planck_radiance(nu, t), planck_oracle(nu, t)) < 1e-12);
    CHECK(rel(planck_radiance(2000.0, 1500.0), planck_oracle(2000.0, 1500.0)) < 1e-12);
}

TEST_CASE("planck radiance vanishes as T goes to zero") {
    // At 10 K the closed form is about 1.7e-127; the exact-zero regime starts near 1 K.
    const double at10 = planck_radiance(2000.0, 10.0);
    CHECK(at10 > 0.0);
    CHECK(at10 < 1e-120);
    CHECK(rel(at10, planck_oracle(2000.0, 10.0)) < 1e-10);
    CHECK(planck_radiance(2000.0, 1.0) < 1e-300);
}

TEST_CASE("planck radiance increases with temperature") {
    CHECK(planck_radiance(2000.0, 3000.0) > planck_radiance(2000.0, 1500.0));
    double prev = 0.0;
    for (double t = 100.0; t <= 4000.0; t += 50.0) {
        const double v = planck_radiance(2200.0, t);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("planck radiance rejects nonpositive inputs") {
    CHECK_THROWS_AS(planck_radiance(0.0, 1000.0), DomainError);
    CHECK_THROWS_AS(planck_radiance(2000.0, 0.0), DomainError);
    CHECK_THROWS_AS(planck_radiance(-1.0, 1000.0), DomainError);
    CHECK_THROWS_AS(planck_radiance(2000.0, -5.0), DomainError);
}

TEST_CASE("line intensity scaling") {
    SUBCASE("identity at the reference temperature") {
        for (const auto& l : bundled_line_list().lines()) REQUIRE(line_intensity_at_T(l, 296.0) == l.s_ref);
    }
    SUBCASE("unit factors for a ground-state line") {
        LineRecord l{Species::CO2, 1e6, 3.5e-20, 0.07, 0.0, 0.7};
        CHECK(line_intensity_at_T(l, 296.0) == l.s_ref);
    }
    SUBCASE("bundled CO line at 2000 K matches 50-digit evaluation") {
        const LineRecord l = co_line();
        CHECK(rel(line_intensity_at_T(l, 2000.0), intensity_oracle(l, 2000.0, 1.0)) < 1e-10);
    }
    SUBCASE("every species matches the oracle with its exponent") {
        Rng rng(3);
        for (int i = 0; i < 60; ++i) {
            const auto& lines = bundled_line_list().lines();
            const LineRecord& l = lines[rng.below(lines.size())];
            const double t = rng.uniform(300.0, 3400.0);
            const double beta = PartitionExponents{}(l.species);
            CHECK(rel(line_intensity_at_T(l, t), intensity_oracle(l, t, beta)) < 1e-10);
            CHECK(line_intensity_at_T(l, t) > 0.0);
        }
    }
    SUBCASE("rejects T <= 0") {
        CHECK_THROWS_AS(line_intensity_at_T(co_line(), 0.0), DomainError);
    }
}

TEST_CASE("Humlicek approximation against the Voigt integral") {
    double worst = 0.0;
    for (double y : {1e-3, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 30.0})
        for (double x : {0.0, 0.3, 1.0, 2.0, 3.5, 5.0, 8.0, 15.0, 40.0}) {
            const double approx = humlicek_w4(x, y).real();
            worst = std::max(worst, rel(approx, voigt_k_oracle(x, y)));
        }
    MESSAGE("max relative error " << worst);
    CHECK(worst < 1e-4);
}

TEST_CASE("voigt profile is symmetric about line center") {
    const LineRecord l = co_line();
    for (double t : {300.0, 1500.0, 3000.0})
        for (double d : {1e-4, 0.01, 0.05, 0.2, 1.0, 5.0, 24.0}) {
            const double a = voigt_value(l.nu0 + d, l, t, PC::standard_atmosphere);
            const double b = voigt_value(l.nu0 - d, l, t, PC::standard_atmosphere);
            CHECK(a >= 0.0);
            CHECK(std::abs(a - b) <= 1e-10 * b);
        }
}

TEST_CASE("voigt limits") {
    SUBCASE("pure Doppler peak") {
        const LineRecord l = co_line();
        const LineWidths w = line_widths(l, 2000.0, 1e-6);
        REQUIRE(w.lorentz < 1e-9 * w.doppler);
        const double peak = voigt_value(l.nu0, l, 2000.0, 1e-6);
        CHECK(rel(peak, std::sqrt(std::log(2.0) / M_PI) / w.doppler) < 1e-3);
    }
    SUBCASE("Gaussian and Lorentzian reductions at peak and two half-widths") {
        const LineWidths gauss{0.004, 1e-9};
        const LineWidths lorentz{1e-9, 0.07};
        auto g = [&](double d) {
            return std::sqrt(std::log(2.0) / M_PI) / gauss.doppler *
                   std::exp(-std::log(2.0) * d * d / (gauss.doppler * gauss.doppler));
        };
        auto lz = [&](double d) { return lorentz.lorentz / (M_PI * (d * d + lorentz.lorentz * lorentz.lorentz)); };
        for (double k : {0.0, 2.0, -2.0}) {
            CHECK(rel(voigt_profile(k * gauss.doppler, gauss), g(k * gauss.doppler)) < 1e-3);
            CHECK(rel(voigt_profile(k * lorentz.lorentz, lorentz), lz(k * lorentz.lorentz)) < 1e-3);
        }
    }
}

TEST_CASE("voigt profile integrates to one over fifty half-widths") {
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    const LineRecord l = co_line();
    auto integral = [&](const LineWidths& w, double half) {
        auto f = [&](double d) { return voigt_profile(d, w); };
        double sum = 0.0;
        const double span = 50.0 * half;
        const int pieces = 400;
        for (int i = 0; i < pieces; ++i) {
            const double a = -span + 2.0 * span * i / pieces;
            sum += gk.integrate(f, a, a + 2.0 * span / pieces, 8, 1e-13);
        }
        return sum;
    };
    SUBCASE("Doppler-dominated line") {
        const LineWidths w = line_widths(l, 2500.0, 1000.0);
        REQUIRE(w.doppler > 5.0 * w.lorentz);
        CHECK(std::abs(integral(w, w.doppler + w.lorentz) - 1.0) < 1e-3);
    }
    SUBCASE("Lorentz-dominated line carries the truncated Lorentz tail") {
        // Past +-50 half-widths a Lorentzian still holds 1 - (2/pi) atan(50) ~ 1.3 %.
        const LineWidths w = line_widths(l, 296.0, PC::standard_atmosphere);
        REQUIRE(w.lorentz > 5.0 * w.doppler);
        const double expected = 2.0 / M_PI * std::atan(50.0);
        CHECK(std::abs(integral(w, w.lorentz) - expected) < 1e-3);
    }
}

TEST_CASE("number density in molecules per cm^3") {
    CHECK(rel(number_density(101325.0, 1.0, 296.0), 101325.0 / (PC::boltzmann * 296.0) * 1e-6) < 1e-15);
    CHECK(number_density(101325.0, 1.0, 296.0) == doctest::Approx(2.479e19).epsilon(1e-3));
}

TEST_CASE("absorption coefficient") {
    const auto& db = bundled_line_list();
    SpectralGrid grid;
    SUBCASE("zero absorbers give zero absorption") {
        const auto k = absorption_coefficient(grid, seg(1.0, 2000.0, 0.0, 0.0, 0.0), db);
        CHECK(std::all_of(k.begin(), k.end(), [](double v) { return v == 0.0; }));
    }
    SUBCASE("doubling every mole fraction doubles k exactly") {
        const auto k1 = absorption_coefficient(grid, seg(1.0, 2000.0, 0.05, 0.06, 0.07), db);
        const auto k2 = absorption_coefficient(grid, seg(1.0, 2000.0, 0.10, 0.12, 0.14), db);
        bool exact = true;
        for (std::size_t i = 0; i < k1.size(); ++i) exact = exact && (k2[i] == 2.0 * k1[i]);
        CHECK(exact);
        CHECK(std::all_of(k1.begin(), k1.end(), [](double v) { return v >= 0.0; }));
    }
    SUBCASE("single line at one grid point equals the term-wise product") {
        const LineRecord l = co_line();
        const LineDatabase one({l});
        const SpectralGrid g{l.nu0, l.nu0 + 0.1, 0.1};
        const PathSegment s = seg(1.0, 1800.0, 0.1, 0.0, 0.0);
        const auto k = absorption_coefficient(g, s, one);
        const double expected = intensity_oracle(l, 1800.0, 1.0) * voigt_value(l.nu0, l, 1800.0, s.pressure) *
                                (s.pressure * 0.1 / (PC::boltzmann * 1800.0) / 1e6);
        CHECK(rel(k[0], expected) < 1e-10);
    }
    SUBCASE("lines far outside the grid are skipped") {
        LineRecord far = co_line();
        far.nu0 = 2600.0;
        const LineDatabase one({far});
        const auto k = absorption_coefficient(grid, seg(1.0, 2000.0, 0.1, 0.0, 0.0), one);
        CHECK(std::all_of(k.begin(), k.end(), [](double v) { return v == 0.0; }));
    }
    SUBCASE("empty database is a usage error") {
        CHECK_THROWS_AS(absorption_coefficient(grid, seg(1.0, 2000.0, 0.1, 0.1, 0.1), LineDatabase{}), UsageError);
    }
}

TEST_CASE("radiative transfer limits") {
    SpectralGrid grid;
    SUBCASE("optically thick segment emits the blackbody") {
        std::vector<double> radiance(grid.size(), 0.0);
        std::vector<double> k(grid.size(), 60.0);
        transfer_segment(radiance, k, 1.0, 2300.0, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, rel(radiance[i], planck_radiance(grid.at(i), 2300.0)));
        CHECK(worst < 1e-12);
    }
    SUBCASE("transparent gas emits nothing") {
        GasPath p;
        p.segments = {seg(5.0, 2000.0, 0.0, 0.0, 0.0), seg(5.0, 2500.0, 0.0, 0.0, 0.0)};
        const Spectrum s = radiative_transfer(p, grid, bundled_line_list());
        CHECK(std::all_of(s.intensity.begin(), s.intensity.end(), [](double v) { return v == 0.0; }));
    }
    SUBCASE("empty path is a usage error") {
        CHECK_THROWS_AS(radiative_transfer(GasPath{}, grid, bundled_line_list()), UsageError);
    }
}

TEST_CASE("spectrum depends on the viewing end") {
    SpectralGrid grid;
    GasPath p;
    p.segments = {seg(5.0, 500.0, 0.0, 0.1, 0.0), seg(5.0, 1500.0, 0.0, 0.1, 0.0)};
    const Spectrum a = radiative_transfer(p, grid, bundled_line_list());
    const Spectrum b = radiative_transfer(p.reversed(), grid, bundled_line_list());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.intensity.size(); ++i) {
        const double m = std::max(a.intensity[i], b.intensity[i]);
        if (m > 0.0) worst = std::max(worst, std::abs(a.intensity[i] - b.intensity[i]) / m);
    }
    CHECK(worst > 0.01);
}

TEST_CASE("radiance bound, order sensitivity and monotone bound on random paths") {
    SpectralGrid grid{2000.0, 2400.0, 0.1};
    Rng rng(17);
    for (int trial = 0; trial < 4; ++trial) {
        GasPath p = random_path(rng, 11);
        const Spectrum s = radiative_transfer(p, grid, bundled_line_list());
        auto bound = [&](const GasPath& path, std::size_t i) {
            double b = 0.0;
            for (const auto& sg : path.segments) b = std::max(b, planck_radiance(grid.at(i), sg.temperature));
            return b;
        };
        bool within = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            within = within && s.intensity[i] >= 0.0 && s.intensity[i] <= bound(p, i) + 1e-12;
        }
        CHECK(within);

        const Spectrum r = radiative_transfer(p.reversed(), grid, bundled_line_list());
        CHECK(r.intensity != s.intensity);

        GasPath hotter = p;
        const auto which = rng.below(hotter.segments.size());
        hotter.segments[which].temperature += 250.0;
        const Spectrum h = radiative_transfer(hotter, grid, bundled_line_list());
        bool monotone = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            monotone = monotone && bound(hotter, i) >= bound(p, i) && h.intensity[i] <= bound(hotter, i) + 1e-12;
        }
        CHECK(monotone);
    }
}

TEST_CASE("halving the grid step barely changes band-integrated radiance") {
    scenegen::ProfileConfig cfg;
    const auto sample = scenegen::generate_sample(cfg, SpectralGrid{}, SlitConfig{}, bundled_line_list(), 5);
    const auto path = scenegen::build_path(cfg, sample.temperatures, sample.mole_fractions);
    auto band = [&](const SpectralGrid& g) {
        const Spectrum s = radiative_transfer(path, g, bundled_line_list());
        // Trapezoid rule over the band.
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < s.intensity.size(); ++i) sum += 0.5 * (s.intensity[i] + s.intensity[i + 1]) * g.step;
        return sum;
    };
    const double coarse = band(SpectralGrid{1800.0, 2500.0, 0.1});
    const double fine = band(SpectralGrid{1800.0, 2500.0, 0.05});
    MESSAGE("relative change " << (coarse - fine) / fine);
    CHECK(std::abs(coarse - fine) / fine < 0.005);
}

TEST_CASE("slit kernel") {
    for (double wing : {0.1, 0.35, 1.0, 4.0, 10.0}) {
        const auto k = slit_kernel(0.1, wing);
        CHECK(std::all_of(k.begin(), k.end(), [](double v) { return v >= 0.0; }));
        CHECK(std::abs(std::accumulate(k.begin(), k.end(), 0.0) - 1.0) < 1e-12);
        CHECK(k.size() % 2 == 1);
    }
    CHECK_THROWS(slit_kernel(0.1, 0.05));
}

TEST_CASE("slit convolution") {
    SpectralGrid grid{1800.0, 1900.0, 0.1};
    const std::size_t n = grid.size();
    SUBCASE("constant spectrum is preserved everywhere including edges") {
        Spectrum s{grid, std::vector<double>(n, 1.7)};
        const Spectrum out = apply_slit(s, SlitConfig{});
        double worst = 0.0;
        for (double v : out.intensity) worst = std::max(worst, std::abs(v - 1.7));
        CHECK(worst < 1e-12);
        CHECK(out.grid == grid);
    }
    SUBCASE("impulse gives the triangular pulse") {
        Spectrum s{grid, std::vector<double>(n, 0.0)};
        const std::size_t i0 = n / 2;
        s.intensity[i0] = 1.0;
        const double wing = 10.0;
        const Spectrum out = apply_slit(s, SlitConfig{wing, 4.0});
        // Direct triangle B(x) = (w - |x|)/w^2 sampled and normalized to unit sum.
        std::vector<double> tri;
        const int half = static_cast<int>(std::floor(wing / grid.step + 1e-9));
        double total = 0.0;
        for (int k = -half; k <= half; ++k) {
            tri.push_back(std::max(0.0, (wing - std::abs(k * grid.step)) / (wing * wing)));
            total += tri.back();
        }
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const long off = static_cast<long>(j) - static_cast<long>(i0);
            const double expected = std::abs(off) <= half ? tri[static_cast<std::size_t>(off + half)] / total : 0.0;
            worst = std::max(worst, std::abs(out.intensity[j] - expected));
        }
        CHECK(worst < 1e-15);
    }
    SUBCASE("random spectrum matches brute-force convolution with edge renormalization") {
        Rng rng(8);
        Spectrum s{grid, std::vector<double>(n)};
        for (auto& v : s.intensity) v = rng.uniform();
        const double wing = 2.0;
        const Spectrum out = apply_slit(s, SlitConfig{wing, 4.0});
        const int half = static_cast<int>(std::floor(wing / grid.step + 1e-9));
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double num = 0.0, den = 0.0;
            for (int k = -half; k <= half; ++k) {
                const long idx = static_cast<long>(j) + k;
                if (idx < 0 || idx >= static_cast<long>(n)) continue;
                const double w = std::max(0.0, 1.0 - std::abs(k) * grid.step / wing);
                num += w * s.intensity[static_cast<std::size_t>(idx)];
                den += w;
            }
            worst = std::max(worst, std::abs(out.intensity[j] - num / den));
        }
        CHECK(worst < 1e-13);
    }
    SUBCASE("slit as narrow as the grid step is nearly the identity") {
        Rng rng(9);
        Spectrum s{grid, std::vector<double>(n)};
        for (auto& v : s.intensity) v = 1.0 + rng.uniform();
        const Spectrum out = apply_slit(s, SlitConfig{grid.step * (1.0 + 1e-7), 4.0});
        double worst = 0.0;
        for (std::size_t j = 1; j + 1 < n; ++j) worst = std::max(worst, rel(out.intensity[j], s.intensity[j]));
        CHECK(worst < 1e-6);
    }
    SUBCASE("slit narrower than the grid step is rejected") {
        Spectrum s{grid, std::vector<double>(n, 1.0)};
        CHECK_THROWS(apply_slit(s, SlitConfig{0.05, 4.0}));
    }
}

TEST_CASE("spectral grid") {
    SpectralGrid g;
    CHECK(g.size() == 7001);
    CHECK(SpectralGrid{0.0, 1.0, 0.3}.size() == 4);
    CHECK(SpectralGrid{1800.0, 2500.0, 0.05}.size() == 14001);
    const auto [a, b] = g.index_range(2100.0, 2190.0);
    CHECK(a == 3000);
    CHECK(b == 3901);
    CHECK_THROWS(SpectralGrid{2500.0, 1800.0, 0.1}.validate());
    CHECK_THROWS(SpectralGrid{1800.0, 2500.0, 0.0}.validate());
}

TEST_CASE("path segment validation") {
    CHECK_NOTHROW(seg(1.0, 2000.0, 0.1, 0.1, 0.1).validate());
    CHECK_THROWS(seg(0.0, 2000.0, 0.1, 0.1, 0.1).validate());
    CHECK_THROWS(seg(1.0, -1.0, 0.1, 0.1, 0.1).validate());
    CHECK_THROWS(seg(1.0, 2000.0, -0.1, 0.1, 0.1).validate());
    CHECK_THROWS(seg(1.0, 2000.0, 0.5, 0.4, 0.3).validate());
    PathSegment p = seg(1.0, 2000.0, 0.1, 0.1, 0.1);
    p.pressure = 0.0;
    CHECK_THROWS(p.validate());
}

TEST_CASE("HITRAN fixed-column records") {
    auto record = [](int mol, int iso, double nu, double s, double gair, double elow, double nair) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "%2d%1d%12.6f%10.3E%10.3E%5.3f%5.3f%10.4f%4.2f%8.6f", mol, iso, nu, s, 1.0,
                      gair, 0.1, elow, nair, -0.001);
        std::string r(buf);
        r.resize(160, ' ');
        return r;
    };
    const std::string text = record(5, 1, 2143.271100, 4.4e-19, 0.062, 3.8450, 0.69) + "\n" +
                             record(2, 1, 2349.142900, 3.5e-18, 0.071, 0.0, 0.75) + "\n" +
                             record(1, 2, 1850.0, 1e-21, 0.08, 500.0, 0.6) + "\n" +
                             record(1, 1, 1900.5, 2e-21, 0.09, 1200.25, 0.62) + "\n";
    const LineDatabase db = parse_hitran_par(text);
    REQUIRE(db.size() == 3);
    CHECK(db.lines()[0].species == Species::H2O);
    CHECK(db.lines()[0].nu0 == doctest::Approx(1900.5));
    CHECK(db.lines()[0].e_lower == doctest::Approx(1200.25));
    CHECK(db.lines()[1].species == Species::CO);
    CHECK(db.lines()[1].s_ref == doctest::Approx(4.4e-19));
    CHECK(db.lines()[1].gamma_air == doctest::Approx(0.062));
    CHECK(db.lines()[1].n_air == doctest::Approx(0.69));
    CHECK(db.lines()[2].species == Species::CO2);
    CHECK_THROWS_AS(parse_hitran_par(record(3, 1, 2000.0, 1e-20, 0.07, 10.0, 0.7)), DataError);
}

TEST_CASE("native CSV line list round trip") {
    const auto& db = bundled_line_list();
    const std::string csv = format_line_csv(db);
    CHECK(csv.rfind("species,nu0,s_ref,gamma_air,e_lower,n_air\n", 0) == 0);
    const LineDatabase back = parse_line_csv(csv);
    REQUIRE(back.size() == db.size());
    for (std::size_t i = 0; i < db.size(); ++i) {
        CHECK(back.lines()[i].species == db.lines()[i].species);
        CHECK(back.lines()[i].nu0 == db.lines()[i].nu0);
        CHECK(back.lines()[i].s_ref == db.lines()[i].s_ref);
        CHECK(back.lines()[i].gamma_air == db.lines()[i].gamma_air);
        CHECK(back.lines()[i].e_lower == db.lines()[i].e_lower);
        CHECK(back.lines()[i].n_air == db.lines()[i].n_air);
    }
    CHECK_THROWS_AS(parse_line_csv("species,nu0,s_ref,gamma_air,e_lower,n_air\nNO,2000,1e-20,0.07,0,0.7\n"), DataError);
    CHECK_THROWS_AS(parse_line_csv("species,nu0,s_ref,gamma_air,e_lower,n_air\nCO,2000,-1e-20,0.07,0,0.7\n"), DataError);
}

TEST_CASE("bundled line list coverage") {
    const auto& db = bundled_line_list();
    for (Species s : kAllSpecies) {
        std::size_t inside = 0;
        for (const auto& l : db.lines())
            if (l.species == s && l.nu0 >= 1800.0 && l.nu0 <= 2500.0) ++inside;
        CHECK(inside >= 200);
    }
    CHECK(std::is_sorted(db.lines().begin(), db.lines().end(),
                         [](const LineRecord& a, const LineRecord& b) { return a.nu0 < b.nu0; }));
}
