#pragma once

#include "losight/core/matrix.hpp"

namespace losight::features {

/// Per-column min-max map onto [lo, hi]. Constant columns map to 0.
struct ScalerModel {
    Vector col_min;
    Vector col_max;
    double lo = -1.0;
    double hi = 1.0;

    Matrix apply(const Matrix& x) const;
    Matrix invert(const Matrix& y) const;
};

ScalerModel fit_scaler(const Matrix& x, double lo, double hi);

}  // namespace losight::features
