#pragma once

#include <vector>

#include "losight/core/matrix.hpp"

namespace losight::features {

struct PcaModel {
    Vector mean;
    /// Column scale used for z-scoring; 0 marks a degenerate column which is
    /// zeroed before projection.
    Vector scale;
    Matrix components;  // one orthonormal row per component, descending variance
    Vector variances;
    bool standardized = true;

    Index n_features() const { return mean.size(); }
};

PcaModel fit_pca(const Matrix& x, bool standardize = true);

/// Projects onto the first k components. k may exceed the number of fitted
/// components (rows - 1 < features); the extra columns are zero.
Matrix pca_transform(const PcaModel& model, const Matrix& x, Index k);

Matrix pca_inverse(const PcaModel& model, const Matrix& reduced);

/// Multiples of 100 below n, then n itself.
std::vector<Index> pca_k_grid(Index n_features);

}  // namespace losight::features
