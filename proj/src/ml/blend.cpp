#include "losight/ml/blend.hpp"

#include <algorithm>
#include <numeric>

#include "losight/core/error.hpp"
#include "losight/core/json_eigen.hpp"
#include "losight/core/random.hpp"
#include "losight/ml/linear.hpp"

namespace losight::ml {

using nlohmann::json;

std::string_view meta_name(MetaKind k) { return k == MetaKind::Ols ? "ols" : "mlp"; }

MetaKind parse_meta(std::string_view name) {
    if (name == "ols") return MetaKind::Ols;
    if (name == "mlp") return MetaKind::Mlp;
    throw UsageError("meta learner must be 'ols' or 'mlp', got '" + std::string(name) + "'");
}

BlendModel::BlendModel(std::vector<RegressorPtr> weak, RegressorPtr meta, MetaKind meta_kind)
    : weak_(std::move(weak)), meta_(std::move(meta)), meta_kind_(meta_kind) {
    if (weak_.empty()) throw UsageError("a blend needs at least one weak learner");
    if (!meta_) throw UsageError("a blend needs a meta learner");
    for (const auto& w : weak_) {
        if (w->input_dim() != weak_.front()->input_dim())
            throw UsageError("weak learners must share the input dimension");
        meta_inputs_ += w->output_dim();
    }
    if (meta_->input_dim() != meta_inputs_)
        throw UsageError("meta learner input dimension must equal the summed weak output dimensions");
}

void BlendModel::predict_row(const double* x, double* out) const {
    std::vector<double> stacked(static_cast<std::size_t>(meta_inputs_));
    double* cursor = stacked.data();
    for (const auto& w : weak_) {
        w->predict_row(x, cursor);
        cursor += w->output_dim();
    }
    meta_->predict_row(stacked.data(), out);
}

json BlendModel::hyperparameters() const { return {{"meta", meta_name(meta_kind_)}, {"weak_count", weak_.size()}}; }

json BlendModel::parameters() const {
    json weak = json::array();
    for (const auto& w : weak_) weak.push_back(w->to_json());
    return {{"weak", weak}, {"meta", meta_->to_json()}};
}

std::shared_ptr<BlendModel> BlendModel::from_json(const json& j) {
    const json& p = j.at("parameters");
    std::vector<RegressorPtr> weak;
    for (const auto& w : p.at("weak")) weak.push_back(regressor_from_json(w));
    return std::make_shared<BlendModel>(std::move(weak), regressor_from_json(p.at("meta")),
                                        parse_meta(j.at("hyperparameters").at("meta").get<std::string>()));
}

Matrix stack_predictions(const std::vector<RegressorPtr>& weak, const Matrix& x) {
    Index cols = 0;
    for (const auto& w : weak) cols += w->output_dim();
    Matrix out(x.rows(), cols);
    Index at = 0;
    for (const auto& w : weak) {
        out.middleCols(at, w->output_dim()) = w->predict(x);
        at += w->output_dim();
    }
    return out;
}

BlendResult train_blender(const std::vector<RegressorPtr>& weak, const Matrix& xval, const Matrix& yval,
                          MetaKind meta, const MlpConfig& meta_mlp, unsigned jobs) {
    if (weak.empty()) throw UsageError("a blend needs at least one weak learner");
    if (xval.rows() != yval.rows()) throw UsageError("validation feature and target row counts differ");
    BlendResult result;
    std::vector<RegressorPtr> kept;
    double best_weak = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < weak.size(); ++i) {
        const Matrix p = weak[i]->predict(xval);
        if (!p.allFinite()) {
            result.excluded.push_back(i);
            result.warnings.push_back("weak learner " + std::to_string(i) + " (" +
                                      std::string(kind_name(weak[i]->kind())) +
                                      ") has non-finite validation predictions; excluded");
            continue;
        }
        best_weak = std::min(best_weak, mean_squared_error(p, yval));
        kept.push_back(weak[i]);
    }
    if (kept.empty()) throw NumericError("no weak learner produced finite validation predictions");

    const Matrix stacked = stack_predictions(kept, xval);
    RegressorPtr meta_model;
    if (meta == MetaKind::Ols) {
        meta_model = train_linear(stacked, yval, 0.0);
    } else {
        const auto n = static_cast<std::size_t>(stacked.rows());
        if (n < 5) throw UsageError("the MLP meta learner needs at least 5 validation rows");
        std::vector<std::size_t> rows(n);
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        Rng rng(derive_seed(meta_mlp.seed, "blend-holdout"));
        rng.shuffle(rows.begin(), rows.end());
        const std::size_t holdout = std::max<std::size_t>(1, n / 5);
        const std::vector<std::size_t> hold(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(holdout));
        const std::vector<std::size_t> fit(rows.begin() + static_cast<std::ptrdiff_t>(holdout), rows.end());
        meta_model = train_mlp(select_rows(stacked, fit), select_rows(yval, fit), select_rows(stacked, hold),
                               select_rows(yval, hold), meta_mlp, jobs)
                         .model;
    }
    result.model = std::make_shared<BlendModel>(std::move(kept), meta_model, meta);
    const double blend_mse = mean_squared_error(result.model->predict(xval), yval);
    if (meta == MetaKind::Ols && blend_mse > best_weak + 1e-12)
        throw NumericError("linear blend validation MSE exceeds the best weak learner's");
    result.model->info.seed = meta == MetaKind::Mlp ? meta_mlp.seed : 0;
    result.model->info.validation_mse = blend_mse;
    return result;
}

}  // namespace losight::ml
