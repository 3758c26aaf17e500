#include "losight/ml/linear.hpp"

#include <Eigen/QR>

#include "losight/core/error.hpp"
#include "losight/core/json_eigen.hpp"

namespace losight::ml {

using nlohmann::json;

LinearModel::LinearModel(Matrix weights, Vector intercept, double lambda)
    : weights_(std::move(weights)), intercept_(std::move(intercept)), lambda_(lambda) {
    if (intercept_.size() != weights_.cols()) throw UsageError("intercept length must match the output count");
    if (!weights_.allFinite() || !intercept_.allFinite()) throw NumericError("linear model has non-finite weights");
}

void LinearModel::predict_row(const double* x, double* out) const {
    const Index d = weights_.rows();
    for (Index k = 0; k < weights_.cols(); ++k) {
        const double* w = weights_.col(k).data();
        double s = intercept_(k);
        for (Index i = 0; i < d; ++i) s += w[i] * x[i];
        out[k] = s;
    }
}

json LinearModel::hyperparameters() const { return {{"lambda", lambda_}}; }

json LinearModel::parameters() const {
    return {{"weights", matrix_to_json(weights_)}, {"intercept", vector_to_json(intercept_)}};
}

std::shared_ptr<LinearModel> LinearModel::from_json(const json& j) {
    const json& p = j.at("parameters");
    return std::make_shared<LinearModel>(matrix_from_json(p.at("weights")), vector_from_json(p.at("intercept")),
                                         j.at("hyperparameters").at("lambda").get<double>());
}

std::shared_ptr<LinearModel> train_linear(const Matrix& x, const Matrix& y, double lambda) {
    if (x.rows() != y.rows()) throw UsageError("X and Y row counts differ");
    if (x.rows() < 1) throw UsageError("linear regression needs at least one row");
    if (!(lambda >= 0.0)) throw UsageError("ridge lambda must be nonnegative");
    const RowVector x_mean = x.colwise().mean();
    const RowVector y_mean = y.colwise().mean();
    const Matrix xc = x.rowwise() - x_mean;
    const Matrix yc = y.rowwise() - y_mean;
    Matrix w;
    if (lambda == 0.0) {
        w = xc.completeOrthogonalDecomposition().solve(yc);
    } else {
        Matrix gram = xc.transpose() * xc;
        gram.diagonal().array() += lambda;
        w = gram.ldlt().solve(xc.transpose() * yc);
    }
    Vector b = (y_mean - x_mean * w).transpose();
    return std::make_shared<LinearModel>(std::move(w), std::move(b), lambda);
}

}  // namespace losight::ml
