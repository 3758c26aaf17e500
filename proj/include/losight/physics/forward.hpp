#pragma once

#include <complex>
#include <vector>

#include "losight/physics/lines.hpp"
#include "losight/physics/path.hpp"
#include "losight/physics/spectrum.hpp"

namespace losight::physics {

/// Spectral radiance per unit wavenumber, 2 h c^2 nu^3 / (exp(c2 nu / T) - 1).
/// Throws DomainError for nu <= 0 or T <= 0.
double planck_radiance(double nu, double temperature);

/// Exponents beta of the power-law partition function Q(T) ~ T^beta.
struct PartitionExponents {
    double co = 1.0;
    double co2 = 1.0;
    double h2o = 1.5;

    double operator()(Species s) const;
};

/// HITRAN temperature scaling of the reference line intensity.
double line_intensity_at_T(const LineRecord& line, double temperature, const PartitionExponents& beta = {});

struct LineWidths {
    double doppler = 0.0;  // HWHM, cm^-1
    double lorentz = 0.0;  // HWHM, cm^-1
};

LineWidths line_widths(const LineRecord& line, double temperature, double pressure);

/// Humlicek (1982) four-region rational approximation of the Faddeeva
/// function w(x + iy) for y >= 0.
std::complex<double> humlicek_w4(double x, double y);

/// Voigt density (1/cm^-1) at offset `detuning` from line center.
double voigt_profile(double detuning, const LineWidths& widths);

double voigt_value(double nu, const LineRecord& line, double temperature, double pressure);

struct ForwardOptions {
    /// Lines are evaluated within this distance of their center and skipped
    /// when the center lies farther than this outside the grid.
    double wing_cutoff = 25.0;
    PartitionExponents partition;
};

/// Molecules per cm^3 for partial pressure p X at temperature T.
double number_density(double pressure, double mole_fraction, double temperature);

/// Total absorption coefficient k_v (cm^-1) on the grid for one segment.
std::vector<double> absorption_coefficient(const SpectralGrid& grid, const PathSegment& segment,
                                           const LineDatabase& db, const ForwardOptions& options = {});

/// Emission along the path with a cold background, accumulated segment by
/// segment toward the detector.
Spectrum radiative_transfer(const GasPath& path, const SpectralGrid& grid, const LineDatabase& db,
                            const ForwardOptions& options = {});

/// Accumulation step reused by radiative_transfer; exposed for tests
/// that prescribe k_v directly.
void transfer_segment(std::vector<double>& radiance, const std::vector<double>& absorption,
                      double length, double temperature, const SpectralGrid& grid);

struct SlitConfig {
    double wing = 10.0;               // cm^-1
    double output_resolution = 4.0;   // informational

    void validate() const;
};

/// Triangular kernel weights at offsets -m..m grid steps, normalized to sum 1.
std::vector<double> slit_kernel(double step, double wing);

/// Convolution with the triangular slit on the input grid. Near the edges the
/// kernel is truncated and renormalized.
Spectrum apply_slit(const Spectrum& spectrum, const SlitConfig& slit);

}  // namespace losight::physics
