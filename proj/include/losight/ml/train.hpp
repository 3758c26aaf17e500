#pragma once

#include <vector>

#include "losight/ml/blend.hpp"
#include "losight/ml/kernel_ridge.hpp"
#include "losight/ml/mlp.hpp"
#include "losight/ml/regressor.hpp"

namespace losight::ml {

/// Validation grids for each model kind. Distance-based scales are multiples
/// of the median pairwise training distance.
struct TuningGrid {
    std::vector<double> ridge_lambdas{0.0, 1e-6, 1e-4, 1e-2, 1.0, 100.0};
    std::vector<int> hidden_units{20};
    std::vector<double> rbf_spread_factors{0.5, 1.0, 2.0, 4.0};
    Index rbf_max_centers = 1500;
    std::vector<double> kernel_lengthscale_factors{0.25, 0.5, 1.0, 2.0};
    std::vector<double> kernel_lambdas{1e-4, 1e-2, 1e-1};
};

TuningGrid tuning_grid_from_json(const nlohmann::json& j, TuningGrid base = {});

/// Median Euclidean distance over at most 500 leading training rows.
double median_pairwise_distance(const Matrix& x);

/// Trains one model of the given kind on (x, y), picking hyperparameters by
/// validation MSE. `kernel` applies to kernel_ridge only.
RegressorPtr train_tuned(ModelKind kind, const Matrix& x, const Matrix& y, const Matrix& xval, const Matrix& yval,
                         const MlpConfig& mlp, const TuningGrid& grid, KernelKind kernel = KernelKind::SquaredExponential,
                         unsigned jobs = 1);

/// The weak-learner roster: linear ridge, MLP, RBFN and kernel ridge with
/// both kernels, each tuned on validation MSE.
std::vector<RegressorPtr> train_roster(const Matrix& x, const Matrix& y, const Matrix& xval, const Matrix& yval,
                                       const MlpConfig& mlp, const TuningGrid& grid, unsigned jobs = 1);

}  // namespace losight::ml
