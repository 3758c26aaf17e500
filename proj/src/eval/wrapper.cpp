#include "losight/eval/wrapper.hpp"

#include <algorithm>
#include <tuple>

#include "losight/core/error.hpp"
#include "losight/core/json_eigen.hpp"
#include "losight/core/parallel.hpp"

namespace losight::eval {

namespace {

struct Cell {
    std::size_t candidate;
    std::optional<Index> k;
    int hidden;
};

bool ranks_before(const FeatureGroupResult& a, const FeatureGroupResult& b) {
    return std::forward_as_tuple(a.validation_mse, a.name, a.pca_k, a.hidden_units) <
           std::forward_as_tuple(b.validation_mse, b.name, b.pca_k, b.hidden_units);
}

}  // namespace

WrapperOutcome wrapper_select(const std::vector<CandidateFeatures>& candidates, const Matrix& targets,
                              const scenegen::SplitAssignment& split, const WrapperConfig& cfg) {
    if (candidates.empty()) throw UsageError("wrapper selection needs at least one feature group");
    if (cfg.hidden_grid.empty()) throw UsageError("referee hidden-unit grid is empty");
    WrapperOutcome out;

    const features::ScalerModel target_scaler = features::fit_scaler(select_rows(targets, split.train), 0.0, 1.0);
    const Matrix y = target_scaler.apply(targets);
    const Matrix y_train = select_rows(y, split.train);
    const Matrix y_val = select_rows(y, split.validation);

    // PCA is fit once per group, serially; the per-k scalers derive from it.
    std::vector<std::optional<features::FeatureTransform>> base(candidates.size());
    std::vector<Cell> cells;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto& cand = candidates[c];
        if (cand.raw.rows() != targets.rows()) {
            out.diagnostics.push_back(cand.name + ": feature rows do not match targets; skipped");
            continue;
        }
        std::vector<Index> ks = cand.group.pca_k ? std::vector<Index>{*cand.group.pca_k}
                                                 : features::pca_k_grid(cand.raw.cols());
        try {
            base[c] = features::fit_feature_transform(cand.raw, split.train, ks.back());
        } catch (const std::exception& e) {
            out.diagnostics.push_back(cand.name + ": " + e.what() + "; skipped");
            continue;
        }
        for (Index k : ks)
            for (int h : cfg.hidden_grid) cells.push_back({c, k, h});
    }

    std::vector<std::optional<FeatureGroupResult>> results(cells.size());
    std::vector<std::string> cell_errors(cells.size());
    parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
        const Cell& cell = cells[i];
        const auto& cand = candidates[cell.candidate];
        try {
            const auto transform = features::with_pca_k(*base[cell.candidate], cand.raw, split.train, *cell.k);
            const Matrix x = features::apply_feature_transform(transform, cand.raw);
            ml::MlpConfig referee = cfg.referee;
            referee.hidden_units = cell.hidden;
            const Matrix x_train = select_rows(x, split.train);
            const auto fit = ml::train_mlp(x_train, y_train, select_rows(x, split.validation), y_val, referee, 1);
            FeatureGroupResult r;
            r.name = cand.name;
            r.group = cand.group;
            r.pca_k = cell.k;
            r.hidden_units = cell.hidden;
            r.raw_features = cand.raw.cols();
            r.train_mse = ml::mean_squared_error(fit.model->predict(x_train), y_train);
            r.validation_mse = fit.model->info.validation_mse;
            results[i] = std::move(r);
        } catch (const std::exception& e) {
            cell_errors[i] = cand.name + " (pca_k " + std::to_string(*cell.k) + ", hidden " +
                             std::to_string(cell.hidden) + "): " + e.what();
        }
    });

    std::vector<std::optional<FeatureGroupResult>> best(candidates.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cell_errors[i].empty()) out.diagnostics.push_back(cell_errors[i]);
        if (!results[i]) continue;
        out.cells.push_back(*results[i]);
        auto& slot = best[cells[i].candidate];
        if (!slot || ranks_before(*results[i], *slot)) slot = results[i];
    }
    for (auto& b : best)
        if (b) out.ranked.push_back(std::move(*b));
    std::sort(out.ranked.begin(), out.ranked.end(), ranks_before);
    return out;
}

WrapperOutcome wrapper_select(const scenegen::Dataset& dataset, const std::vector<features::FeatureGroup>& groups,
                              const WrapperConfig& cfg) {
    if (groups.empty()) throw UsageError("wrapper selection needs at least one feature group");
    std::vector<CandidateFeatures> candidates;
    std::vector<std::string> diagnostics;
    for (const auto& g : groups) {
        try {
            candidates.push_back({g.label(), g, features::extract_raw_features(dataset.spectra, dataset.grid, g, cfg.jobs)});
        } catch (const std::exception& e) {
            diagnostics.push_back(g.label() + ": featurization failed: " + e.what() + "; skipped");
        }
    }
    if (candidates.empty()) {
        WrapperOutcome out;
        out.diagnostics = std::move(diagnostics);
        return out;
    }
    WrapperOutcome out = wrapper_select(candidates, dataset.temperatures, dataset.split, cfg);
    out.diagnostics.insert(out.diagnostics.begin(), diagnostics.begin(), diagnostics.end());
    return out;
}

}  // namespace losight::eval
