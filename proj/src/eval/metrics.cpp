#include "losight/eval/metrics.hpp"

#include <cmath>

#include "losight/core/error.hpp"
#include "losight/features/representation.hpp"

namespace losight::eval {

namespace {

SegmentMetrics pooled(std::span<const double> t, std::span<const double> p) {
    double se = 0.0, rel = 0.0, sum_t = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = p[i] - t[i];
        se += d * d;
        rel += std::abs(d) / t[i];
        sum_t += t[i];
    }
    const auto n = static_cast<double>(t.size());
    SegmentMetrics m;
    m.rmse = std::sqrt(se / n);
    m.re = rel / n;
    m.rrmse = m.rmse / (sum_t / n);
    m.r = features::pearson(t, p);
    return m;
}

}  // namespace

MetricReport compute_metrics(const Matrix& t_true, const Matrix& t_pred, const features::ScalerModel* target_scaler) {
    if (t_true.rows() != t_pred.rows() || t_true.cols() != t_pred.cols())
        throw UsageError("true and predicted temperature matrices differ in shape");
    if (t_true.size() == 0) throw UsageError("metrics need at least one value");
    for (Index i = 0; i < t_true.size(); ++i)
        if (!(t_true.data()[i] > 0.0)) throw UsageError("true temperatures must be positive");
    if (!t_pred.allFinite()) throw NumericError("predicted temperatures are not finite");

    const auto all_true = std::span<const double>(t_true.data(), static_cast<std::size_t>(t_true.size()));
    const auto all_pred = std::span<const double>(t_pred.data(), static_cast<std::size_t>(t_pred.size()));
    const SegmentMetrics total = pooled(all_true, all_pred);
    MetricReport report;
    report.rmse = total.rmse;
    report.re = total.re;
    report.rrmse = total.rrmse;
    report.r = total.r;
    const auto rows = static_cast<std::size_t>(t_true.rows());
    for (Index s = 0; s < t_true.cols(); ++s) {
        report.segments.push_back(pooled(std::span<const double>(t_true.col(s).data(), rows),
                                         std::span<const double>(t_pred.col(s).data(), rows)));
    }
    if (target_scaler) {
        const Matrix a = target_scaler->apply(t_true);
        const Matrix b = target_scaler->apply(t_pred);
        report.mse_normalized = (a - b).squaredNorm() / static_cast<double>(a.size());
    }
    return report;
}

}  // namespace losight::eval
