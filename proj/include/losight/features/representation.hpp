#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace losight::features {

enum class BasisKind { Polynomial, Sinusoidal, Exponential, Power };

std::string_view basis_name(BasisKind kind);

struct BasisSpec {
    BasisKind kind = BasisKind::Polynomial;
    int order = 3;        // polynomial only
    int window_len = 50;

    /// order+1 for polynomials, 4 sinusoidal (c, q1, q2, f),
    /// 4 exponential (m1, b1, m2, b2), 3 power (z, j, c).
    std::size_t coefficients_per_window() const;
    void validate() const;
};

std::size_t window_count(std::size_t signal_len, const BasisSpec& basis);
std::size_t feature_count(std::size_t signal_len, const BasisSpec& basis);

struct WindowFit {
    std::vector<double> coefficients;
    bool fallback = false;  // nonlinear fit diverged; coefficients hold the linear fit
};

/// Fits one window. x runs 1..len(y).
WindowFit fit_window(std::span<const double> y, const BasisSpec& basis);

/// Evaluates the basis at x = 1..len for one window's coefficients.
std::vector<double> evaluate_window(const WindowFit& fit, const BasisSpec& basis, std::size_t len);

struct Representation {
    std::vector<double> coefficients;  // window-major
    std::vector<bool> fallback;        // one flag per window
    std::size_t warnings = 0;
};

/// Windowed basis coefficients; the trailing remainder is dropped.
Representation representation_features(std::span<const double> signal, const BasisSpec& basis);

/// Fitted signal over the covered windows.
std::vector<double> reconstruct(const Representation& rep, const BasisSpec& basis);

struct FitQuality {
    double mse = 0.0;
    double r = 0.0;
};

FitQuality reconstruction_quality(std::span<const double> signal, const BasisSpec& basis);

/// Pearson correlation; 0 when either input has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace losight::features
