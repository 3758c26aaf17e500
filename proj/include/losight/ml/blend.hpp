#pragma once

#include <string>
#include <vector>

#include "losight/ml/mlp.hpp"
#include "losight/ml/regressor.hpp"

namespace losight::ml {

enum class MetaKind { Ols, Mlp };

std::string_view meta_name(MetaKind k);
MetaKind parse_meta(std::string_view name);

/// Two-stage ensemble: the meta learner maps the concatenated weak-learner
/// predictions to the target.
class BlendModel final : public Regressor {
public:
    BlendModel(std::vector<RegressorPtr> weak, RegressorPtr meta, MetaKind meta_kind);

    ModelKind kind() const override { return ModelKind::Blend; }
    Index input_dim() const override { return weak_.front()->input_dim(); }
    Index output_dim() const override { return meta_->output_dim(); }
    void predict_row(const double* x, double* out) const override;
    nlohmann::json hyperparameters() const override;
    nlohmann::json parameters() const override;

    const std::vector<RegressorPtr>& weak() const { return weak_; }
    const RegressorPtr& meta() const { return meta_; }
    MetaKind meta_kind() const { return meta_kind_; }

    static std::shared_ptr<BlendModel> from_json(const nlohmann::json& j);

private:
    std::vector<RegressorPtr> weak_;
    RegressorPtr meta_;
    MetaKind meta_kind_;
    Index meta_inputs_ = 0;
};

struct BlendResult {
    std::shared_ptr<BlendModel> model;
    std::vector<std::string> warnings;
    std::vector<std::size_t> excluded;  // indices into the weak list
};

/// Column-wise concatenation of each learner's predictions.
Matrix stack_predictions(const std::vector<RegressorPtr>& weak, const Matrix& x);

/// Fits the meta learner on the validation split only. Weak learners are
/// never refit. The MLP meta learner early-stops on a seeded 20% holdout of
/// the validation rows.
BlendResult train_blender(const std::vector<RegressorPtr>& weak, const Matrix& xval, const Matrix& yval,
                          MetaKind meta, const MlpConfig& meta_mlp = {}, unsigned jobs = 1);

}  // namespace losight::ml
