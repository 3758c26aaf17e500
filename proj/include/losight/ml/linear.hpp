#pragma once

#include "losight/ml/regressor.hpp"

namespace losight::ml {

/// y = W^T x + b.
class LinearModel final : public Regressor {
public:
    LinearModel(Matrix weights, Vector intercept, double lambda = 0.0);

    ModelKind kind() const override { return ModelKind::LinearRidge; }
    Index input_dim() const override { return weights_.rows(); }
    Index output_dim() const override { return weights_.cols(); }
    void predict_row(const double* x, double* out) const override;
    nlohmann::json hyperparameters() const override;
    nlohmann::json parameters() const override;

    const Matrix& weights() const { return weights_; }  // inputs x outputs
    const Vector& intercept() const { return intercept_; }
    double lambda() const { return lambda_; }

    static std::shared_ptr<LinearModel> from_json(const nlohmann::json& j);

private:
    Matrix weights_;
    Vector intercept_;
    double lambda_;
};

/// Ridge regression with an unpenalized intercept. lambda = 0 is ordinary
/// least squares, solved in the minimum-norm sense when rank deficient.
std::shared_ptr<LinearModel> train_linear(const Matrix& x, const Matrix& y, double lambda);

}  // namespace losight::ml
