#pragma once

#include <cstdint>
#include <vector>

#include "losight/ml/regressor.hpp"

namespace losight::ml {

struct MlpConfig {
    int hidden_units = 20;
    int max_epochs = 500;
    int patience = 25;
    double learning_rate = 1e-3;
    int batch_size = 32;
    int restarts = 5;
    std::uint64_t seed = 0;

    void validate() const;
};

nlohmann::json mlp_config_to_json(const MlpConfig& cfg);
MlpConfig mlp_config_from_json(const nlohmann::json& j, MlpConfig base = {});

/// One tanh hidden layer and a linear output layer.
struct MlpParams {
    Matrix w1;  // hidden x inputs
    Vector b1;
    Matrix w2;  // outputs x hidden
    Vector b2;

    bool all_finite() const;
};

/// Mean squared error over all entries and its gradient with respect to every
/// parameter.
struct LossGradient {
    double loss = 0.0;
    MlpParams grad;
};

LossGradient loss_and_gradient(const MlpParams& p, const Matrix& x, const Matrix& y);

/// Scaled uniform fan-in initialization: weights in +-1/sqrt(fan_in), zero biases.
MlpParams init_mlp(Index inputs, Index hidden, Index outputs, std::uint64_t seed);

class MlpModel final : public Regressor {
public:
    MlpModel(MlpParams params, MlpConfig cfg);

    ModelKind kind() const override { return ModelKind::Mlp; }
    Index input_dim() const override { return params_.w1.cols(); }
    Index output_dim() const override { return params_.w2.rows(); }
    void predict_row(const double* x, double* out) const override;
    nlohmann::json hyperparameters() const override;
    nlohmann::json parameters() const override;

    const MlpParams& params() const { return params_; }
    const MlpConfig& config() const { return cfg_; }

    static std::shared_ptr<MlpModel> from_json(const nlohmann::json& j);

private:
    MlpParams params_;
    MlpConfig cfg_;
};

struct RestartSummary {
    std::uint64_t seed = 0;
    int epochs = 0;
    int best_epoch = 0;
    double best_validation_mse = 0.0;
    bool aborted = false;
};

struct MlpResult {
    std::shared_ptr<MlpModel> model;        // best validation over all restarts
    std::shared_ptr<MlpModel> final_epoch;  // last-epoch parameters of the chosen restart
    std::vector<RestartSummary> restarts;
};

/// Adam on mini-batches with early stopping on (xval, yval). Restarts run on
/// up to `jobs` threads; each restart is serial and seeded by its index.
MlpResult train_mlp(const Matrix& x, const Matrix& y, const Matrix& xval, const Matrix& yval, const MlpConfig& cfg,
                    unsigned jobs = 1);

}  // namespace losight::ml
