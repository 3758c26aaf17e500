#pragma once

#include <vector>

#include "losight/ml/regressor.hpp"

namespace losight::ml {

/// Half-maximum constant: phi(spread) = 1/2.
inline constexpr double kRbfShape = 0.8326;

/// phi(r) = exp(-(0.8326 r / spread)^2), plus a bias term.
class RbfnModel final : public Regressor {
public:
    RbfnModel(Matrix centers, Matrix weights, Vector bias, double spread);

    ModelKind kind() const override { return ModelKind::Rbfn; }
    Index input_dim() const override { return centers_.cols(); }
    Index output_dim() const override { return weights_.cols(); }
    void predict_row(const double* x, double* out) const override;
    nlohmann::json hyperparameters() const override;
    nlohmann::json parameters() const override;

    const Matrix& centers() const { return centers_; }  // one center per row
    double spread() const { return spread_; }

    static std::shared_ptr<RbfnModel> from_json(const nlohmann::json& j);

private:
    Matrix centers_;
    Matrix weights_;  // centers x outputs
    Vector bias_;
    double spread_;
};

struct RbfnTrace {
    std::vector<Index> order;         // training rows in insertion order
    std::vector<double> train_mse;    // after each insertion
};

/// Greedy center insertion: the training row with the largest residual norm is
/// added next, output weights are refit by least squares, and growth stops at
/// max_centers or when the relative MSE improvement drops below 1e-8.
std::shared_ptr<RbfnModel> train_rbfn(const Matrix& x, const Matrix& y, double spread, Index max_centers,
                                      RbfnTrace* trace = nullptr);

/// Same growth, but the returned center count is the checkpoint with the
/// lowest validation MSE.
std::shared_ptr<RbfnModel> train_rbfn_validated(const Matrix& x, const Matrix& y, const Matrix& xval,
                                                const Matrix& yval, double spread, Index max_centers);

}  // namespace losight::ml
