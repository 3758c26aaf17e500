#include "losight/ml/kernel_ridge.hpp"

#include <Eigen/Cholesky>

#include <cmath>

#include "losight/core/error.hpp"
#include "losight/core/json_eigen.hpp"

namespace losight::ml {

using nlohmann::json;

std::string_view kernel_name(KernelKind k) {
    return k == KernelKind::SquaredExponential ? "squared_exponential" : "rational_quadratic";
}

KernelKind parse_kernel(std::string_view name) {
    if (name == "squared_exponential" || name == "se") return KernelKind::SquaredExponential;
    if (name == "rational_quadratic" || name == "rq") return KernelKind::RationalQuadratic;
    throw UsageError("unknown kernel '" + std::string(name) + "'");
}

double KernelParams::operator()(double r2) const {
    const double l2 = lengthscale * lengthscale;
    if (kind == KernelKind::SquaredExponential) return std::exp(-0.5 * r2 / l2);
    return std::pow(1.0 + r2 / (2.0 * alpha * l2), -alpha);
}

KernelRidgeModel::KernelRidgeModel(Matrix train_x, Matrix coefficients, Vector mean, KernelParams kernel,
                                   double lambda)
    : train_x_(std::move(train_x)),
      coefficients_(std::move(coefficients)),
      mean_(std::move(mean)),
      kernel_(kernel),
      lambda_(lambda) {
    if (!(kernel_.lengthscale > 0.0) || !(kernel_.alpha > 0.0)) throw UsageError("kernel scales must be positive");
    if (coefficients_.rows() != train_x_.rows() || mean_.size() != coefficients_.cols())
        throw UsageError("inconsistent kernel ridge parameter shapes");
    if (!coefficients_.allFinite()) throw NumericError("kernel ridge has non-finite coefficients");
}

void KernelRidgeModel::predict_row(const double* x, double* out) const {
    const Index d = train_x_.cols();
    const Index m = coefficients_.cols();
    for (Index k = 0; k < m; ++k) out[k] = mean_(k);
    for (Index c = 0; c < train_x_.rows(); ++c) {
        double r2 = 0.0;
        for (Index i = 0; i < d; ++i) {
            const double diff = x[i] - train_x_(c, i);
            r2 += diff * diff;
        }
        const double kv = kernel_(r2);
        for (Index k = 0; k < m; ++k) out[k] += coefficients_(c, k) * kv;
    }
}

json KernelRidgeModel::hyperparameters() const {
    return {{"kernel", kernel_name(kernel_.kind)},
            {"lengthscale", kernel_.lengthscale},
            {"alpha", kernel_.alpha},
            {"lambda", lambda_}};
}

json KernelRidgeModel::parameters() const {
    return {{"train_x", matrix_to_json(train_x_)},
            {"coefficients", matrix_to_json(coefficients_)},
            {"mean", vector_to_json(mean_)}};
}

std::shared_ptr<KernelRidgeModel> KernelRidgeModel::from_json(const json& j) {
    const json& h = j.at("hyperparameters");
    const json& p = j.at("parameters");
    KernelParams k{parse_kernel(h.at("kernel").get<std::string>()), h.at("lengthscale").get<double>(),
                   h.at("alpha").get<double>()};
    return std::make_shared<KernelRidgeModel>(matrix_from_json(p.at("train_x")), matrix_from_json(p.at("coefficients")),
                                              vector_from_json(p.at("mean")), k, h.at("lambda").get<double>());
}

Matrix squared_distances(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw UsageError("distance operands differ in width");
    Matrix d = -2.0 * a * b.transpose();
    d.colwise() += a.rowwise().squaredNorm();
    d.rowwise() += b.rowwise().squaredNorm().transpose();
    return d.cwiseMax(0.0);
}

Matrix kernel_matrix(const Matrix& a, const Matrix& b, const KernelParams& k) {
    return squared_distances(a, b).unaryExpr([&](double r2) { return k(r2); });
}

std::shared_ptr<KernelRidgeModel> train_kernel_ridge(const Matrix& x, const Matrix& y, const KernelParams& kernel,
                                                     double lambda, const Matrix* train_sqdist) {
    if (x.rows() != y.rows()) throw UsageError("X and Y row counts differ");
    if (x.rows() < 1) throw UsageError("kernel ridge needs at least one row");
    if (!(lambda >= 0.0)) throw UsageError("kernel ridge lambda must be nonnegative");
    Matrix k = train_sqdist ? train_sqdist->unaryExpr([&](double r2) { return kernel(r2); }).eval()
                            : kernel_matrix(x, x, kernel);
    k.diagonal().array() += lambda;
    const Vector mean = y.colwise().mean().transpose();
    const Matrix yc = y.rowwise() - mean.transpose();
    Eigen::LLT<Matrix> llt(k);
    if (llt.info() != Eigen::Success) {
        k.diagonal().array() += 1e-8;
        llt.compute(k);
        if (llt.info() != Eigen::Success) throw NumericError("kernel matrix is not positive definite");
    }
    Matrix alpha = llt.solve(yc);
    return std::make_shared<KernelRidgeModel>(x, std::move(alpha), mean, kernel, lambda);
}

}  // namespace losight::ml
