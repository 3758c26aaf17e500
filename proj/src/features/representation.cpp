#include "losight/features/representation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "losight/core/error.hpp"

namespace losight::features {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kSinusoidMaxIterations = 50;
constexpr int kLmMaxIterations = 200;
constexpr double kExpLimit = 700.0;

// Design matrix [x^0 .. x^order] for x = 1..len, with its QR factors.
struct PolynomialSolver {
    MatrixXd design;
    Eigen::ColPivHouseholderQR<MatrixXd> qr;
};

const PolynomialSolver& polynomial_solver(int len, int order) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, PolynomialSolver> cache;
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.try_emplace({len, order});
    if (inserted) {
        MatrixXd a(len, order + 1);
        for (int i = 0; i < len; ++i) {
            double p = 1.0;
            for (int k = 0; k <= order; ++k) {
                a(i, k) = p;
                p *= static_cast<double>(i + 1);
            }
        }
        it->second.design = a;
        it->second.qr.compute(a);
    }
    return it->second;
}

// Per-frequency projection matrices for the linear part of the sinusoid.
struct SinusoidGrid {
    std::vector<double> freqs;
    std::vector<MatrixXd> design;   // len x 3: [1, cos(fx), sin(fx)]
    std::vector<MatrixXd> pinv;     // 3 x len
};

const SinusoidGrid& sinusoid_grid(int len) {
    static std::mutex mutex;
    static std::map<int, SinusoidGrid> cache;
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.try_emplace(len);
    if (inserted) {
        SinusoidGrid& g = it->second;
        for (int k = 1; 0.01 * k <= std::numbers::pi; ++k) {
            const double f = 0.01 * k;
            MatrixXd a(len, 3);
            for (int i = 0; i < len; ++i) {
                const double x = i + 1.0;
                a(i, 0) = 1.0;
                a(i, 1) = std::cos(f * x);
                a(i, 2) = std::sin(f * x);
            }
            g.freqs.push_back(f);
            g.pinv.push_back(a.colPivHouseholderQr().solve(MatrixXd::Identity(len, len)));
            g.design.push_back(std::move(a));
        }
    }
    return it->second;
}

bool all_finite(const VectorXd& v) { return v.allFinite(); }

VectorXd to_vector(std::span<const double> y) {
    return Eigen::Map<const VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

VectorXd linear_fit(const VectorXd& y) {
    return polynomial_solver(static_cast<int>(y.size()), 1).qr.solve(y);
}

// Model interface for the nonlinear fits: residual y - f(theta) and the
// Jacobian of f. Returns false on overflow.
struct ExponentialModel {
    static bool eval(const VectorXd& theta, const VectorXd& y, VectorXd& resid, MatrixXd* jac) {
        const Eigen::Index n = y.size();
        const double m1 = theta(0), b1 = theta(1), m2 = theta(2), b2 = theta(3);
        if (std::abs(b1) * static_cast<double>(n) > kExpLimit || std::abs(b2) * static_cast<double>(n) > kExpLimit) {
            return false;
        }
        resid.resize(n);
        if (jac) jac->resize(n, 4);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = static_cast<double>(i + 1);
            const double e1 = std::exp(b1 * x), e2 = std::exp(b2 * x);
            resid(i) = y(i) - (m1 * e1 + m2 * e2);
            if (jac) {
                (*jac)(i, 0) = e1;
                (*jac)(i, 1) = m1 * x * e1;
                (*jac)(i, 2) = e2;
                (*jac)(i, 3) = m2 * x * e2;
            }
        }
        return resid.allFinite() && (!jac || jac->allFinite());
    }
};

struct PowerModel {
    static bool eval(const VectorXd& theta, const VectorXd& y, VectorXd& resid, MatrixXd* jac) {
        const Eigen::Index n = y.size();
        const double z = theta(0), j = theta(1), c = theta(2);
        if (std::abs(j) * std::log(static_cast<double>(n)) > kExpLimit) return false;
        resid.resize(n);
        if (jac) jac->resize(n, 3);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = static_cast<double>(i + 1);
            const double p = std::pow(x, j);
            resid(i) = y(i) - (z * p + c);
            if (jac) {
                (*jac)(i, 0) = p;
                (*jac)(i, 1) = z * p * std::log(x);
                (*jac)(i, 2) = 1.0;
            }
        }
        return resid.allFinite() && (!jac || jac->allFinite());
    }
};

struct SinusoidModel {
    static bool eval(const VectorXd& theta, const VectorXd& y, VectorXd& resid, MatrixXd* jac) {
        const Eigen::Index n = y.size();
        const double c = theta(0), q1 = theta(1), q2 = theta(2), f = theta(3);
        resid.resize(n);
        if (jac) jac->resize(n, 4);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = static_cast<double>(i + 1);
            const double cs = std::cos(f * x), sn = std::sin(f * x);
            resid(i) = y(i) - (c + q1 * cs + q2 * sn);
            if (jac) {
                (*jac)(i, 0) = 1.0;
                (*jac)(i, 1) = cs;
                (*jac)(i, 2) = sn;
                (*jac)(i, 3) = x * (q2 * cs - q1 * sn);
            }
        }
        return resid.allFinite() && (!jac || jac->allFinite());
    }
};

// Levenberg-Marquardt with Marquardt diagonal scaling. Returns false when the
// fit overflows or produces non-finite parameters.
template <typename Model>
bool levenberg_marquardt(VectorXd& theta, const VectorXd& y, int max_iterations) {
    VectorXd resid;
    MatrixXd jac;
    if (!Model::eval(theta, y, resid, &jac)) return false;
    double sse = resid.squaredNorm();
    double lambda = 1e-3;
    VectorXd trial_resid;
    for (int it = 0; it < max_iterations; ++it) {
        const MatrixXd jtj = jac.transpose() * jac;
        const VectorXd jtr = jac.transpose() * resid;
        VectorXd diag = jtj.diagonal().cwiseMax(1e-12 * std::max(1.0, jtj.diagonal().maxCoeff()));
        bool improved = false;
        while (lambda < 1e16) {
            MatrixXd a = jtj;
            a.diagonal() += lambda * diag;
            const VectorXd step = a.ldlt().solve(jtr);
            const VectorXd trial = theta + step;
            if (all_finite(trial) && Model::eval(trial, y, trial_resid, nullptr)) {
                const double trial_sse = trial_resid.squaredNorm();
                if (trial_sse < sse) {
                    const double gain = sse - trial_sse;
                    theta = trial;
                    lambda = std::max(lambda / 10.0, 1e-12);
                    if (!Model::eval(theta, y, resid, &jac)) return false;
                    sse = trial_sse;
                    improved = true;
                    if (gain <= 1e-12 * sse + 1e-300) return true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!improved) break;
    }
    return all_finite(theta) && std::isfinite(sse);
}

// Gauss-Newton with step halving, used to refine the sinusoid frequency.
bool gauss_newton_sinusoid(VectorXd& theta, const VectorXd& y) {
    VectorXd resid, trial_resid;
    MatrixXd jac;
    if (!SinusoidModel::eval(theta, y, resid, &jac)) return false;
    double sse = resid.squaredNorm();
    for (int it = 0; it < kSinusoidMaxIterations; ++it) {
        const VectorXd step = jac.colPivHouseholderQr().solve(resid);
        if (!all_finite(step)) return false;
        double scale = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 30; ++halving, scale *= 0.5) {
            const VectorXd trial = theta + scale * step;
            if (!SinusoidModel::eval(trial, y, trial_resid, nullptr)) continue;
            const double trial_sse = trial_resid.squaredNorm();
            if (trial_sse < sse) {
                const double gain = sse - trial_sse;
                theta = trial;
                SinusoidModel::eval(theta, y, resid, &jac);
                sse = trial_sse;
                improved = gain > 1e-14 * sse + 1e-300;
                break;
            }
        }
        if (!improved) break;
    }
    return all_finite(theta);
}

// Folds f into [0, pi] using the integer sampling of x.
void canonicalize_sinusoid(VectorXd& theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double f = std::fmod(theta(3), two_pi);
    if (f < 0.0) f += two_pi;
    if (f > std::numbers::pi) {
        f = two_pi - f;
        theta(2) = -theta(2);
    }
    theta(3) = f;
}

VectorXd fit_sinusoid_grid(const VectorXd& y) {
    const SinusoidGrid& grid = sinusoid_grid(static_cast<int>(y.size()));
    double best_sse = std::numeric_limits<double>::infinity();
    VectorXd best(4);
    for (std::size_t k = 0; k < grid.freqs.size(); ++k) {
        const VectorXd coef = grid.pinv[k] * y;
        const double sse = (y - grid.design[k] * coef).squaredNorm();
        if (sse < best_sse) {
            best_sse = sse;
            best << coef(0), coef(1), coef(2), grid.freqs[k];
        }
    }
    return best;
}

WindowFit fallback_fit(const VectorXd& y, std::size_t width) {
    WindowFit fit;
    fit.fallback = true;
    fit.coefficients.assign(width, 0.0);
    const VectorXd lin = linear_fit(y);
    fit.coefficients[0] = lin(0);
    fit.coefficients[1] = lin(1);
    return fit;
}

}  // namespace

std::string_view basis_name(BasisKind kind) {
    switch (kind) {
        case BasisKind::Polynomial: return "polynomial";
        case BasisKind::Sinusoidal: return "sinusoidal";
        case BasisKind::Exponential: return "exponential";
        case BasisKind::Power: return "power";
    }
    return "?";
}

std::size_t BasisSpec::coefficients_per_window() const {
    switch (kind) {
        case BasisKind::Polynomial: return static_cast<std::size_t>(order) + 1;
        case BasisKind::Sinusoidal: return 4;
        case BasisKind::Exponential: return 4;
        case BasisKind::Power: return 3;
    }
    return 0;
}

void BasisSpec::validate() const {
    if (kind == BasisKind::Polynomial && (order < 1 || order > 3)) {
        throw UsageError("polynomial order must be 1, 2 or 3");
    }
    if (window_len < static_cast<int>(coefficients_per_window()) + 1) {
        throw UsageError("window too short for the basis");
    }
}

std::size_t window_count(std::size_t signal_len, const BasisSpec& basis) {
    return signal_len / static_cast<std::size_t>(basis.window_len);
}

std::size_t feature_count(std::size_t signal_len, const BasisSpec& basis) {
    return window_count(signal_len, basis) * basis.coefficients_per_window();
}

WindowFit fit_window(std::span<const double> window, const BasisSpec& basis) {
    const VectorXd y = to_vector(window);
    const std::size_t width = basis.coefficients_per_window();
    const auto n = y.size();
    switch (basis.kind) {
        case BasisKind::Polynomial: {
            return {to_std(polynomial_solver(static_cast<int>(n), basis.order).qr.solve(y)), false};
        }
        case BasisKind::Sinusoidal: {
            VectorXd theta = fit_sinusoid_grid(y);
            if (!all_finite(theta) || !gauss_newton_sinusoid(theta, y)) return fallback_fit(y, width);
            canonicalize_sinusoid(theta);
            return {to_std(theta), false};
        }
        case BasisKind::Exponential: {
            VectorXd theta(4);
            theta << y(0), -0.01, y(n - 1) - y(0), 0.01;
            if (!levenberg_marquardt<ExponentialModel>(theta, y, kLmMaxIterations)) return fallback_fit(y, width);
            return {to_std(theta), false};
        }
        case BasisKind::Power: {
            const double bound = y.cwiseAbs().maxCoeff();
            VectorXd theta(3);
            theta << std::clamp(y(n - 1) - y(0), -bound, bound), 1.0, y.minCoeff();
            if (!levenberg_marquardt<PowerModel>(theta, y, kLmMaxIterations)) return fallback_fit(y, width);
            return {to_std(theta), false};
        }
    }
    throw UsageError("unknown basis");
}

std::vector<double> evaluate_window(const WindowFit& fit, const BasisSpec& basis, std::size_t len) {
    std::vector<double> out(len);
    const auto& c = fit.coefficients;
    for (std::size_t i = 0; i < len; ++i) {
        const double x = static_cast<double>(i + 1);
        if (fit.fallback) {
            out[i] = c[0] + c[1] * x;
            continue;
        }
        switch (basis.kind) {
            case BasisKind::Polynomial: {
                double acc = 0.0;
                for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
                out[i] = acc;
                break;
            }
            case BasisKind::Sinusoidal: out[i] = c[0] + c[1] * std::cos(c[3] * x) + c[2] * std::sin(c[3] * x); break;
            case BasisKind::Exponential: out[i] = c[0] * std::exp(c[1] * x) + c[2] * std::exp(c[3] * x); break;
            case BasisKind::Power: out[i] = c[0] * std::pow(x, c[1]) + c[2]; break;
        }
    }
    return out;
}

Representation representation_features(std::span<const double> signal, const BasisSpec& basis) {
    basis.validate();
    const auto len = static_cast<std::size_t>(basis.window_len);
    if (signal.size() < len) throw UsageError("signal shorter than the representation window");
    const std::size_t windows = window_count(signal.size(), basis);
    const std::size_t width = basis.coefficients_per_window();

    Representation rep;
    rep.coefficients.reserve(windows * width);
    rep.fallback.assign(windows, false);

    if (basis.kind == BasisKind::Polynomial) {
        // One factorization serves every window.
        const auto& solver = polynomial_solver(static_cast<int>(len), basis.order);
        const Eigen::Map<const MatrixXd> y(signal.data(), static_cast<Eigen::Index>(len),
                                           static_cast<Eigen::Index>(windows));
        const MatrixXd coef = solver.qr.solve(y);
        for (Eigen::Index w = 0; w < coef.cols(); ++w)
            for (Eigen::Index k = 0; k < coef.rows(); ++k) rep.coefficients.push_back(coef(k, w));
        return rep;
    }

    for (std::size_t w = 0; w < windows; ++w) {
        const WindowFit fit = fit_window(signal.subspan(w * len, len), basis);
        rep.coefficients.insert(rep.coefficients.end(), fit.coefficients.begin(), fit.coefficients.end());
        if (fit.fallback) {
            rep.fallback[w] = true;
            ++rep.warnings;
        }
    }
    return rep;
}

std::vector<double> reconstruct(const Representation& rep, const BasisSpec& basis) {
    const std::size_t width = basis.coefficients_per_window();
    const auto len = static_cast<std::size_t>(basis.window_len);
    const std::size_t windows = rep.coefficients.size() / width;
    std::vector<double> out;
    out.reserve(windows * len);
    for (std::size_t w = 0; w < windows; ++w) {
        WindowFit fit;
        fit.coefficients.assign(rep.coefficients.begin() + static_cast<std::ptrdiff_t>(w * width),
                                rep.coefficients.begin() + static_cast<std::ptrdiff_t>((w + 1) * width));
        fit.fallback = w < rep.fallback.size() && rep.fallback[w];
        const auto values = evaluate_window(fit, basis, len);
        out.insert(out.end(), values.begin(), values.end());
    }
    return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw UsageError("pearson requires equal nonempty inputs");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

FitQuality reconstruction_quality(std::span<const double> signal, const BasisSpec& basis) {
    const Representation rep = representation_features(signal, basis);
    const std::vector<double> fitted = reconstruct(rep, basis);
    const auto covered = signal.first(fitted.size());
    FitQuality q;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const double d = fitted[i] - covered[i];
        q.mse += d * d;
    }
    q.mse /= static_cast<double>(fitted.size());
    q.r = pearson(covered, fitted);
    return q;
}

}  // namespace losight::features
