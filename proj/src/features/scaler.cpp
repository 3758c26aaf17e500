#include "losight/features/scaler.hpp"

#include "losight/core/error.hpp"

namespace losight::features {

ScalerModel fit_scaler(const Matrix& x, double lo, double hi) {
    if (!(lo < hi)) throw UsageError("scaler range requires lo < hi");
    if (x.rows() < 1) throw UsageError("scaler needs at least one row");
    ScalerModel m;
    m.lo = lo;
    m.hi = hi;
    m.col_min = x.colwise().minCoeff().transpose();
    m.col_max = x.colwise().maxCoeff().transpose();
    return m;
}

Matrix ScalerModel::apply(const Matrix& x) const {
    if (x.cols() != col_min.size()) throw UsageError("scaler input has the wrong number of columns");
    Matrix y(x.rows(), x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
        const double span = col_max(j) - col_min(j);
        if (span > 0.0) {
            y.col(j) = ((x.col(j).array() - col_min(j)) / span * (hi - lo) + lo).matrix();
        } else {
            y.col(j).setZero();
        }
    }
    return y;
}

Matrix ScalerModel::invert(const Matrix& y) const {
    if (y.cols() != col_min.size()) throw UsageError("scaler input has the wrong number of columns");
    Matrix x(y.rows(), y.cols());
    for (Index j = 0; j < y.cols(); ++j) {
        const double span = col_max(j) - col_min(j);
        if (span > 0.0) {
            x.col(j) = ((y.col(j).array() - lo) / (hi - lo) * span + col_min(j)).matrix();
        } else {
            x.col(j).setConstant(col_min(j));
        }
    }
    return x;
}

}  // namespace losight::features
