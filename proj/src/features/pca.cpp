#include "losight/features/pca.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "losight/core/error.hpp"

namespace losight::features {

namespace {

Matrix standardize(const PcaModel& model, const Matrix& x) {
    Matrix z = x.rowwise() - model.mean.transpose();
    for (Index j = 0; j < z.cols(); ++j) {
        const double s = model.scale(j);
        if (s > 0.0) {
            z.col(j) /= s;
        } else {
            z.col(j).setZero();
        }
    }
    return z;
}

}  // namespace

PcaModel fit_pca(const Matrix& x, bool standardize_columns) {
    if (x.rows() < 2) throw UsageError("PCA needs at least two rows");
    if (x.cols() < 1) throw UsageError("PCA needs at least one feature");
    PcaModel model;
    model.standardized = standardize_columns;
    model.mean = x.colwise().mean().transpose();
    model.scale = Vector::Ones(x.cols());
    const Matrix centered = x.rowwise() - model.mean.transpose();
    const double dof = static_cast<double>(x.rows() - 1);
    for (Index j = 0; j < x.cols(); ++j) {
        const double sd = std::sqrt(centered.col(j).squaredNorm() / dof);
        const double magnitude = std::max(std::abs(model.mean(j)), centered.col(j).cwiseAbs().maxCoeff());
        if (!(sd > 1e-12 * std::max(magnitude, 1e-300))) {
            model.scale(j) = 0.0;
        } else if (standardize_columns) {
            model.scale(j) = sd;
        }
    }
    const Matrix z = standardize(model, x);
    Eigen::BDCSVD<Matrix> svd(z, Eigen::ComputeThinV);
    const Matrix& v = svd.matrixV();
    const Vector& s = svd.singularValues();
    model.components = v.transpose();
    model.variances = s.array().square() / dof;
    // Deterministic sign: the largest-magnitude loading of each component is positive.
    for (Index c = 0; c < model.components.rows(); ++c) {
        Index arg = 0;
        model.components.row(c).cwiseAbs().maxCoeff(&arg);
        if (model.components(c, arg) < 0.0) model.components.row(c) *= -1.0;
    }
    return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& x, Index k) {
    if (x.cols() != model.n_features()) throw UsageError("PCA input has the wrong number of features");
    if (k < 1 || k > model.n_features()) throw UsageError("PCA component count must be in [1, n_features]");
    const Index fitted = std::min<Index>(k, model.components.rows());
    Matrix out = Matrix::Zero(x.rows(), k);
    out.leftCols(fitted) = standardize(model, x) * model.components.topRows(fitted).transpose();
    return out;
}

Matrix pca_inverse(const PcaModel& model, const Matrix& reduced) {
    const Index fitted = std::min<Index>(reduced.cols(), model.components.rows());
    Matrix z = reduced.leftCols(fitted) * model.components.topRows(fitted);
    for (Index j = 0; j < z.cols(); ++j) {
        const double s = model.scale(j);
        if (s > 0.0) {
            z.col(j) *= s;
        } else {
            z.col(j).setZero();
        }
    }
    return z.rowwise() + model.mean.transpose();
}

std::vector<Index> pca_k_grid(Index n_features) {
    std::vector<Index> grid;
    for (Index k = 100; k < n_features; k += 100) grid.push_back(k);
    grid.push_back(n_features);
    return grid;
}

}  // namespace losight::features
