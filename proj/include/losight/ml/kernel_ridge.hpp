#pragma once

#include "losight/ml/regressor.hpp"

namespace losight::ml {

enum class KernelKind { SquaredExponential, RationalQuadratic };

std::string_view kernel_name(KernelKind k);
KernelKind parse_kernel(std::string_view name);

struct KernelParams {
    KernelKind kind = KernelKind::SquaredExponential;
    double lengthscale = 1.0;
    double alpha = 1.0;  // rational quadratic only

    double operator()(double squared_distance) const;
};

/// Posterior-mean style predictor: f(x) = mean + sum_i k(x, x_i) a_i.
class KernelRidgeModel final : public Regressor {
public:
    KernelRidgeModel(Matrix train_x, Matrix coefficients, Vector mean, KernelParams kernel, double lambda);

    ModelKind kind() const override { return ModelKind::KernelRidge; }
    Index input_dim() const override { return train_x_.cols(); }
    Index output_dim() const override { return coefficients_.cols(); }
    void predict_row(const double* x, double* out) const override;
    nlohmann::json hyperparameters() const override;
    nlohmann::json parameters() const override;

    const KernelParams& kernel() const { return kernel_; }
    double lambda() const { return lambda_; }

    static std::shared_ptr<KernelRidgeModel> from_json(const nlohmann::json& j);

private:
    Matrix train_x_;
    Matrix coefficients_;
    Vector mean_;
    KernelParams kernel_;
    double lambda_;
};

Matrix squared_distances(const Matrix& a, const Matrix& b);
Matrix kernel_matrix(const Matrix& a, const Matrix& b, const KernelParams& k);

/// Solves (K + lambda I) a = Y - mean by Cholesky; on failure 1e-8 is added to
/// the diagonal and the factorization retried once.
/// `train_sqdist` optionally supplies squared_distances(x, x).
std::shared_ptr<KernelRidgeModel> train_kernel_ridge(const Matrix& x, const Matrix& y, const KernelParams& kernel,
                                                     double lambda, const Matrix* train_sqdist = nullptr);

}  // namespace losight::ml
