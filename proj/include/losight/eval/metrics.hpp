#pragma once

#include <limits>
#include <vector>

#include "losight/core/matrix.hpp"
#include "losight/features/scaler.hpp"

namespace losight::eval {

struct SegmentMetrics {
    double rmse = 0.0;
    double re = 0.0;
    double rrmse = 0.0;
    double r = 0.0;
};

/// Pooled over every (sample, segment) pair, temperatures in K.
struct MetricReport {
    double mse_normalized = std::numeric_limits<double>::quiet_NaN();
    double rmse = 0.0;
    double re = 0.0;
    double rrmse = 0.0;
    double r = 0.0;
    std::vector<SegmentMetrics> segments;
};

/// RMSE, mean relative error, RMSE over mean true temperature, and Pearson R.
/// When `target_scaler` is given, mse_normalized is the MSE after mapping
/// both matrices through it.
MetricReport compute_metrics(const Matrix& t_true, const Matrix& t_pred,
                             const features::ScalerModel* target_scaler = nullptr);

}  // namespace losight::eval
