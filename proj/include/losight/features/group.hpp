#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "losight/core/matrix.hpp"
#include "losight/features/pca.hpp"
#include "losight/features/representation.hpp"
#include "losight/features/scaler.hpp"
#include "losight/features/statistics.hpp"
#include "losight/physics/spectrum.hpp"

namespace losight::features {

enum class Extractor {
    Polynomial,
    Sinusoidal,
    Exponential,
    Power,
    StatsWhole,
    StatsBands,
    StatsAgg,
    IntensityRatio,
};

std::string_view extractor_name(Extractor e);
Extractor parse_extractor(std::string_view name);

/// Feature-group descriptor. The JSON form is
/// {transform, extractor, order, window_len, pca_k}; pca_k absent or null
/// means no PCA step.
struct FeatureGroup {
    std::string transform = "log";  // "log" or "none"
    Extractor extractor = Extractor::Polynomial;
    int order = 3;
    int window_len = 50;
    std::optional<Index> pca_k;

    BasisSpec basis() const;
    /// Human-readable tag such as "poly3-50" or "stats_bands".
    std::string label() const;
    void validate() const;
};

nlohmann::json group_to_json(const FeatureGroup& g);
FeatureGroup group_from_json(const nlohmann::json& j);
FeatureGroup load_group(const std::filesystem::path& path);

/// Transform plus extractor for one spectrum. `warnings` accumulates
/// nonlinear-fit fallbacks.
std::vector<double> extract_features(std::span<const double> intensity, const physics::SpectralGrid& grid,
                                     const FeatureGroup& group, std::size_t* warnings = nullptr);

/// extract_features over every row of `spectra`.
Matrix extract_raw_features(const Matrix& spectra, const physics::SpectralGrid& grid, const FeatureGroup& group,
                            unsigned jobs = 1, std::size_t* warnings = nullptr);

/// PCA (optional) then min-max scaling to (-1, 1), both fit on training rows.
struct FeatureTransform {
    std::optional<PcaModel> pca;
    Index pca_k = 0;
    ScalerModel scaler;
};

/// Fits the PCA once; use with_pca_k to derive transforms for smaller k.
FeatureTransform fit_feature_transform(const Matrix& raw, const std::vector<std::size_t>& train_rows,
                                       std::optional<Index> pca_k);
FeatureTransform with_pca_k(const FeatureTransform& base, const Matrix& raw,
                            const std::vector<std::size_t>& train_rows, Index k);
Matrix apply_feature_transform(const FeatureTransform& t, const Matrix& raw);

nlohmann::json transform_to_json(const FeatureTransform& t);
FeatureTransform transform_from_json(const nlohmann::json& j);

}  // namespace losight::features
