#include "losight/ml/train.hpp"

#include <algorithm>
#include <cmath>

#include "losight/core/error.hpp"
#include "losight/core/parallel.hpp"
#include "losight/ml/linear.hpp"
#include "losight/ml/rbfn.hpp"

namespace losight::ml {

using nlohmann::json;

TuningGrid tuning_grid_from_json(const json& j, TuningGrid g) {
    g.ridge_lambdas = j.value("ridge_lambdas", g.ridge_lambdas);
    g.hidden_units = j.value("hidden_units", g.hidden_units);
    g.rbf_spread_factors = j.value("rbf_spread_factors", g.rbf_spread_factors);
    g.rbf_max_centers = j.value("rbf_max_centers", g.rbf_max_centers);
    g.kernel_lengthscale_factors = j.value("kernel_lengthscale_factors", g.kernel_lengthscale_factors);
    g.kernel_lambdas = j.value("kernel_lambdas", g.kernel_lambdas);
    if (g.ridge_lambdas.empty() || g.hidden_units.empty() || g.rbf_spread_factors.empty() ||
        g.kernel_lengthscale_factors.empty() || g.kernel_lambdas.empty())
        throw UsageError("tuning grids must be nonempty");
    return g;
}

double median_pairwise_distance(const Matrix& x) {
    const Index n = std::min<Index>(x.rows(), 500);
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) d.push_back((x.row(i) - x.row(j)).norm());
    if (d.empty()) return 1.0;
    auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    return *mid > 0.0 ? *mid : 1.0;
}

namespace {

template <typename Train>
std::shared_ptr<Regressor> best_of(std::size_t cells, unsigned jobs, const Matrix& xval, const Matrix& yval, Train&& train) {
    std::vector<std::shared_ptr<Regressor>> models(cells);
    std::vector<double> scores(cells, std::numeric_limits<double>::infinity());
    parallel_for(cells, jobs, [&](std::size_t c) {
        models[c] = train(c);
        const Matrix p = models[c]->predict(xval);
        if (p.allFinite()) scores[c] = mean_squared_error(p, yval);
    });
    std::size_t best = 0;
    for (std::size_t c = 1; c < cells; ++c)
        if (scores[c] < scores[best]) best = c;
    if (!std::isfinite(scores[best])) throw NumericError("no tuning cell produced finite validation predictions");
    return models[best];
}

}  // namespace

RegressorPtr train_tuned(ModelKind kind, const Matrix& x, const Matrix& y, const Matrix& xval, const Matrix& yval,
                         const MlpConfig& mlp, const TuningGrid& grid, KernelKind kernel, unsigned jobs) {
    if (x.rows() != y.rows() || xval.rows() != yval.rows()) throw UsageError("feature and target row counts differ");
    std::shared_ptr<Regressor> model;
    switch (kind) {
        case ModelKind::LinearRidge:
            model = best_of(grid.ridge_lambdas.size(), jobs, xval, yval,
                            [&](std::size_t c) { return train_linear(x, y, grid.ridge_lambdas[c]); });
            break;
        case ModelKind::Mlp: {
            const std::size_t cells = grid.hidden_units.size();
            const unsigned inner = cells >= jobs ? 1u : jobs;
            model = best_of(cells, cells >= jobs ? jobs : 1u, xval, yval, [&](std::size_t c) {
                MlpConfig cfg = mlp;
                cfg.hidden_units = grid.hidden_units[c];
                return train_mlp(x, y, xval, yval, cfg, inner).model;
            });
            break;
        }
        case ModelKind::Rbfn: {
            const double scale = median_pairwise_distance(x);
            const Index cap = std::min<Index>(grid.rbf_max_centers, x.rows());
            model = best_of(grid.rbf_spread_factors.size(), jobs, xval, yval, [&](std::size_t c) {
                return train_rbfn_validated(x, y, xval, yval, grid.rbf_spread_factors[c] * scale, cap);
            });
            break;
        }
        case ModelKind::KernelRidge: {
            const double scale = median_pairwise_distance(x);
            const Matrix d_train = squared_distances(x, x);
            const std::size_t nl = grid.kernel_lambdas.size();
            model = best_of(grid.kernel_lengthscale_factors.size() * nl, jobs, xval, yval, [&](std::size_t c) {
                const KernelParams k{kernel, grid.kernel_lengthscale_factors[c / nl] * scale, 1.0};
                return train_kernel_ridge(x, y, k, grid.kernel_lambdas[c % nl], &d_train);
            });
            break;
        }
        case ModelKind::Blend: throw UsageError("blends are built with train_blender");
    }
    model->info.validation_mse = mean_squared_error(model->predict(xval), yval);
    return model;
}

std::vector<RegressorPtr> train_roster(const Matrix& x, const Matrix& y, const Matrix& xval, const Matrix& yval,
                                       const MlpConfig& mlp, const TuningGrid& grid, unsigned jobs) {
    return {
        train_tuned(ModelKind::LinearRidge, x, y, xval, yval, mlp, grid, KernelKind::SquaredExponential, jobs),
        train_tuned(ModelKind::Mlp, x, y, xval, yval, mlp, grid, KernelKind::SquaredExponential, jobs),
        train_tuned(ModelKind::Rbfn, x, y, xval, yval, mlp, grid, KernelKind::SquaredExponential, jobs),
        train_tuned(ModelKind::KernelRidge, x, y, xval, yval, mlp, grid, KernelKind::SquaredExponential, jobs),
        train_tuned(ModelKind::KernelRidge, x, y, xval, yval, mlp, grid, KernelKind::RationalQuadratic, jobs),
    };
}

}  // namespace losight::ml
