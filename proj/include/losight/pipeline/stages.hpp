#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "losight/eval/metrics.hpp"
#include "losight/eval/report.hpp"
#include "losight/features/group.hpp"
#include "losight/ml/blend.hpp"
#include "losight/ml/kernel_ridge.hpp"
#include "losight/ml/regressor.hpp"
#include "losight/pipeline/config.hpp"
#include "losight/physics/lines.hpp"
#include "losight/scenegen/dataset.hpp"

namespace losight::pipeline {

/// Explicit paths first, then $LOSIGHT_LINE_DB, then the bundled list.
/// Multiple files are merged.
physics::LineDatabase resolve_line_database(const std::vector<std::filesystem::path>& paths);

/// Generates cfg.samples spectra and assigns the train/validation/test split.
scenegen::Dataset generate_stage(const RunConfig& cfg, const physics::LineDatabase& db);

/// Transformed features for every sample plus what is needed to train and
/// evaluate: targets in K, the split, and the fitted scalers.
struct FeatureSet {
    features::FeatureGroup group;
    features::FeatureTransform transform;
    features::ScalerModel target_scaler;  // (0, 1) per segment, fit on the train rows
    Matrix x;
    Matrix temperatures;
    scenegen::SplitAssignment split;
    std::uint64_t dataset_seed = 0;
    double total_length = 0.0;
    std::size_t fit_warnings = 0;

    Matrix rows_x(const std::vector<std::size_t>& rows) const;
    /// Normalized targets.
    Matrix rows_y(const std::vector<std::size_t>& rows) const;
};

/// Raw features, then PCA (if the group asks for it) and scaling fit on the
/// train split.
FeatureSet featurize_stage(const scenegen::Dataset& dataset, const features::FeatureGroup& group, unsigned jobs);

void save_features(const std::filesystem::path& path, const FeatureSet& f);
FeatureSet load_features(const std::filesystem::path& path);

/// A trained regressor with the feature pipeline and target scaler it expects.
struct ModelBundle {
    ml::RegressorPtr model;
    features::FeatureGroup group;
    features::FeatureTransform transform;
    features::ScalerModel target_scaler;

    /// Predictions in K.
    Matrix predict_temperatures(const Matrix& x) const;
    /// Featurizes raw spectra with the bundled group and transform first.
    Matrix predict_from_spectra(const scenegen::Dataset& dataset, unsigned jobs) const;
};

nlohmann::json bundle_to_json(const ModelBundle& b);
ModelBundle bundle_from_json(const nlohmann::json& j);
void save_bundle(const std::filesystem::path& path, const ModelBundle& b);
ModelBundle load_bundle(const std::filesystem::path& path);

struct TrainRequest {
    ml::ModelKind kind = ml::ModelKind::Mlp;
    ml::KernelKind kernel = ml::KernelKind::SquaredExponential;
    ml::MlpConfig mlp;
    ml::TuningGrid tuning;
    unsigned jobs = 1;
};

ModelBundle train_stage(const FeatureSet& f, const TrainRequest& req);

/// Weak learners must have been trained on the same feature set.
struct BlendOutcome {
    ModelBundle bundle;
    std::vector<std::string> warnings;
};

BlendOutcome blend_stage(const std::vector<ModelBundle>& weak, const FeatureSet& f, ml::MetaKind meta,
                         const ml::MlpConfig& meta_mlp, unsigned jobs);

struct Evaluation {
    eval::MetricReport test;
    double train_mse = 0.0;
    Matrix test_true;  // K
    Matrix test_pred;  // K
};

Evaluation evaluate_stage(const ModelBundle& b, const FeatureSet& f);

/// Short display name such as "mlp", "kernel_ridge(rational_quadratic)" or "blend(mlp)".
std::string model_label(const ml::Regressor& m);

/// results.csv, segments.csv and profiles.csv under `dir`.
void write_evaluation_report(const std::filesystem::path& dir, const std::vector<eval::ResultRow>& rows,
                             const Evaluation& primary, const FeatureSet& f);

}  // namespace losight::pipeline
