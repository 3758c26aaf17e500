#pragma once

#include <optional>
#include <string>
#include <vector>

#include "losight/features/group.hpp"
#include "losight/ml/mlp.hpp"
#include "losight/scenegen/dataset.hpp"

namespace losight::eval {

struct WrapperConfig {
    ml::MlpConfig referee;  // hidden_units is taken from hidden_grid
    std::vector<int> hidden_grid{20};
    unsigned jobs = 1;
};

struct FeatureGroupResult {
    std::string name;
    features::FeatureGroup group;
    std::optional<Index> pca_k;
    int hidden_units = 0;
    Index raw_features = 0;
    double train_mse = 0.0;
    double validation_mse = 0.0;
};

/// A group with its raw (untransformed) feature matrix, one row per sample.
struct CandidateFeatures {
    std::string name;
    features::FeatureGroup group;
    Matrix raw;
};

struct WrapperOutcome {
    std::vector<FeatureGroupResult> ranked;  // best cell per group, ascending validation MSE
    std::vector<FeatureGroupResult> cells;   // every evaluated cell
    std::vector<std::string> diagnostics;
};

/// Referee MLP over every group x pca_k x hidden-units cell. A group with a
/// fixed pca_k uses only that value; otherwise the multiples-of-100 grid.
/// Targets are scaled to (0, 1) on the training rows. Every cell uses the
/// same referee seed, so results do not depend on group order.
WrapperOutcome wrapper_select(const std::vector<CandidateFeatures>& candidates, const Matrix& targets,
                              const scenegen::SplitAssignment& split, const WrapperConfig& cfg);

/// Featurizes each group from the dataset spectra first; a group whose
/// featurization fails is skipped with a diagnostic.
WrapperOutcome wrapper_select(const scenegen::Dataset& dataset, const std::vector<features::FeatureGroup>& groups,
                              const WrapperConfig& cfg);

}  // namespace losight::eval
