#include "losight/pipeline/stages.hpp"

#include <cstdlib>

#include "losight/core/error.hpp"
#include "losight/core/json_eigen.hpp"
#include "losight/ml/kernel_ridge.hpp"
#include "losight/ml/train.hpp"
#include "losight/scenegen/container.hpp"
#include "losight/scenegen/serialization.hpp"

namespace losight::pipeline {

using nlohmann::json;

namespace {

json scaler_to_json(const features::ScalerModel& s) {
    return {{"lo", s.lo}, {"hi", s.hi}, {"min", vector_to_json(s.col_min)}, {"max", vector_to_json(s.col_max)}};
}

features::ScalerModel scaler_from_json(const json& j) {
    features::ScalerModel s;
    s.lo = j.at("lo").get<double>();
    s.hi = j.at("hi").get<double>();
    s.col_min = vector_from_json(j.at("min"));
    s.col_max = vector_from_json(j.at("max"));
    if (s.col_min.size() != s.col_max.size()) throw DataError("scaler min/max lengths differ");
    return s;
}

}  // namespace

physics::LineDatabase resolve_line_database(const std::vector<std::filesystem::path>& paths) {
    std::vector<std::filesystem::path> sources = paths;
    if (sources.empty()) {
        if (const char* env = std::getenv(kLineDbEnv); env && *env) sources.emplace_back(env);
    }
    if (sources.empty()) return physics::bundled_line_list();
    std::vector<physics::LineRecord> merged;
    for (const auto& p : sources) {
        const auto db = physics::load_line_database(p);
        merged.insert(merged.end(), db.lines().begin(), db.lines().end());
    }
    return physics::LineDatabase(std::move(merged));
}

scenegen::Dataset generate_stage(const RunConfig& cfg, const physics::LineDatabase& db) {
    cfg.validate();
    const std::uint64_t seed = stage_seed(cfg.seed, "generate");
    const auto samples = scenegen::generate_dataset(cfg.profile, cfg.samples, cfg.grid, cfg.slit, db, seed,
                                                    cfg.resolved_jobs(), cfg.forward);
    scenegen::Dataset d = scenegen::to_dataset(samples, cfg.profile, cfg.grid, cfg.slit, seed);
    d.split = scenegen::split_dataset(cfg.samples, cfg.split, stage_seed(cfg.seed, "split"));
    return d;
}

Matrix FeatureSet::rows_x(const std::vector<std::size_t>& rows) const { return select_rows(x, rows); }

Matrix FeatureSet::rows_y(const std::vector<std::size_t>& rows) const {
    return target_scaler.apply(select_rows(temperatures, rows));
}

FeatureSet featurize_stage(const scenegen::Dataset& dataset, const features::FeatureGroup& group, unsigned jobs) {
    if (dataset.split.train.empty()) throw UsageError("dataset has no training split");
    FeatureSet f;
    f.group = group;
    const Matrix raw = features::extract_raw_features(dataset.spectra, dataset.grid, group, jobs, &f.fit_warnings);
    f.transform = features::fit_feature_transform(raw, dataset.split.train, group.pca_k);
    f.x = features::apply_feature_transform(f.transform, raw);
    f.temperatures = dataset.temperatures;
    f.split = dataset.split;
    f.target_scaler = features::fit_scaler(select_rows(dataset.temperatures, dataset.split.train), 0.0, 1.0);
    f.dataset_seed = dataset.seed;
    f.total_length = dataset.profile.total_length;
    return f;
}

void save_features(const std::filesystem::path& path, const FeatureSet& f) {
    scenegen::Container c;
    c.data = f.x;
    c.targets = f.temperatures;
    c.metadata = {{"kind", "features"},
                  {"group", features::group_to_json(f.group)},
                  {"transform", features::transform_to_json(f.transform)},
                  {"target_scaler", scaler_to_json(f.target_scaler)},
                  {"split", f.split},
                  {"dataset_seed", f.dataset_seed},
                  {"total_length", f.total_length},
                  {"fit_warnings", f.fit_warnings}};
    scenegen::write_container(path, c);
}

FeatureSet load_features(const std::filesystem::path& path) {
    const scenegen::Container c = scenegen::read_container(path);
    try {
        if (c.metadata.value("kind", std::string()) != "features")
            throw DataError(path.string() + " does not hold a feature set");
        FeatureSet f;
        f.x = c.data;
        f.temperatures = c.targets;
        f.group = features::group_from_json(c.metadata.at("group"));
        f.transform = features::transform_from_json(c.metadata.at("transform"));
        f.target_scaler = scaler_from_json(c.metadata.at("target_scaler"));
        f.split = c.metadata.at("split").get<scenegen::SplitAssignment>();
        f.dataset_seed = c.metadata.at("dataset_seed").get<std::uint64_t>();
        f.total_length = c.metadata.at("total_length").get<double>();
        f.fit_warnings = c.metadata.at("fit_warnings").get<std::size_t>();
        if (f.x.rows() != f.temperatures.rows()) throw DataError("feature/target row mismatch");
        return f;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed feature metadata: ") + e.what());
    } catch (const UsageError& e) {
        throw DataError(std::string("malformed feature metadata: ") + e.what());
    }
}

Matrix ModelBundle::predict_temperatures(const Matrix& x) const { return target_scaler.invert(model->predict(x)); }

Matrix ModelBundle::predict_from_spectra(const scenegen::Dataset& dataset, unsigned jobs) const {
    const Matrix raw = features::extract_raw_features(dataset.spectra, dataset.grid, group, jobs);
    return predict_temperatures(features::apply_feature_transform(transform, raw));
}

json bundle_to_json(const ModelBundle& b) {
    json j = b.model->to_json();
    j["feature_group"] = features::group_to_json(b.group);
    j["scalers"] = {{"features", features::transform_to_json(b.transform)},
                    {"targets", scaler_to_json(b.target_scaler)}};
    return j;
}

ModelBundle bundle_from_json(const json& j) {
    ModelBundle b;
    b.model = ml::regressor_from_json(j);
    try {
        b.group = features::group_from_json(j.at("feature_group"));
        b.transform = features::transform_from_json(j.at("scalers").at("features"));
        b.target_scaler = scaler_from_json(j.at("scalers").at("targets"));
    } catch (const json::exception& e) {
        throw DataError(std::string("model file lacks its feature pipeline: ") + e.what());
    } catch (const UsageError& e) {
        throw DataError(std::string("model file has an invalid feature group: ") + e.what());
    }
    if (b.target_scaler.col_min.size() != b.model->output_dim())
        throw DataError("target scaler does not match the model outputs");
    return b;
}

void save_bundle(const std::filesystem::path& path, const ModelBundle& b) { write_json(path, bundle_to_json(b)); }

ModelBundle load_bundle(const std::filesystem::path& path) { return bundle_from_json(read_json(path)); }

ModelBundle train_stage(const FeatureSet& f, const TrainRequest& req) {
    const Matrix x = f.rows_x(f.split.train), y = f.rows_y(f.split.train);
    const Matrix xv = f.rows_x(f.split.validation), yv = f.rows_y(f.split.validation);
    ModelBundle b;
    b.model = ml::train_tuned(req.kind, x, y, xv, yv, req.mlp, req.tuning, req.kernel, req.jobs);
    b.group = f.group;
    b.transform = f.transform;
    b.target_scaler = f.target_scaler;
    return b;
}

BlendOutcome blend_stage(const std::vector<ModelBundle>& weak, const FeatureSet& f, ml::MetaKind meta,
                         const ml::MlpConfig& meta_mlp, unsigned jobs) {
    if (weak.empty()) throw UsageError("a blend needs at least one weak learner");
    const json group = features::group_to_json(f.group);
    std::vector<ml::RegressorPtr> models;
    for (const auto& w : weak) {
        if (features::group_to_json(w.group) != group)
            throw UsageError("weak learner was trained on a different feature group");
        if (w.model->input_dim() != f.x.cols()) throw UsageError("weak learner input width does not match features");
        models.push_back(w.model);
    }
    auto result = ml::train_blender(models, f.rows_x(f.split.validation), f.rows_y(f.split.validation), meta,
                                    meta_mlp, jobs);
    BlendOutcome out;
    out.bundle = {result.model, f.group, f.transform, f.target_scaler};
    out.warnings = std::move(result.warnings);
    return out;
}

Evaluation evaluate_stage(const ModelBundle& b, const FeatureSet& f) {
    if (features::group_to_json(b.group) != features::group_to_json(f.group))
        throw UsageError("model was trained on a different feature group");
    if (f.split.test.empty()) throw UsageError("feature set has no test split");
    Evaluation e;
    const Matrix x_train = f.rows_x(f.split.train);
    e.train_mse = ml::mean_squared_error(b.model->predict(x_train), f.rows_y(f.split.train));
    e.test_true = select_rows(f.temperatures, f.split.test);
    e.test_pred = b.predict_temperatures(f.rows_x(f.split.test));
    e.test = eval::compute_metrics(e.test_true, e.test_pred, &b.target_scaler);
    return e;
}

std::string model_label(const ml::Regressor& m) {
    std::string label(ml::kind_name(m.kind()));
    if (const auto* kr = dynamic_cast<const ml::KernelRidgeModel*>(&m))
        label += "(" + std::string(ml::kernel_name(kr->kernel().kind)) + ")";
    if (const auto* bl = dynamic_cast<const ml::BlendModel*>(&m))
        label += "(" + std::string(ml::meta_name(bl->meta_kind())) + ")";
    return label;
}

void write_evaluation_report(const std::filesystem::path& dir, const std::vector<eval::ResultRow>& rows,
                             const Evaluation& primary, const FeatureSet& f) {
    eval::write_results_csv(dir / "results.csv", rows);
    eval::write_segment_csv(dir / "segments.csv", primary.test);
    const auto picks = eval::select_profile_samples(primary.test_true);
    eval::write_profile_csv(dir / "profiles.csv", primary.test_true, primary.test_pred, picks, f.split.test,
                            f.total_length);
}

}  // namespace losight::pipeline
