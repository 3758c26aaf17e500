#include "losight/features/group.hpp"

#include <fstream>

#include "losight/core/error.hpp"
#include "losight/core/json_eigen.hpp"
#include "losight/core/parallel.hpp"
#include "losight/features/ratio.hpp"
#include "losight/features/transform.hpp"

namespace losight::features {

using nlohmann::json;

namespace {

struct ExtractorEntry {
    Extractor value;
    std::string_view name;
};

constexpr ExtractorEntry kExtractors[] = {
    {Extractor::Polynomial, "polynomial"},   {Extractor::Sinusoidal, "sinusoidal"},
    {Extractor::Exponential, "exponential"}, {Extractor::Power, "power"},
    {Extractor::StatsWhole, "stats_whole"},  {Extractor::StatsBands, "stats_bands"},
    {Extractor::StatsAgg, "stats_agg"},      {Extractor::IntensityRatio, "intensity_ratio"},
};

bool is_basis(Extractor e) {
    return e == Extractor::Polynomial || e == Extractor::Sinusoidal || e == Extractor::Exponential ||
           e == Extractor::Power;
}

}  // namespace

std::string_view extractor_name(Extractor e) {
    for (const auto& entry : kExtractors)
        if (entry.value == e) return entry.name;
    return "unknown";
}

Extractor parse_extractor(std::string_view name) {
    for (const auto& entry : kExtractors)
        if (entry.name == name) return entry.value;
    throw UsageError("unknown feature extractor '" + std::string(name) + "'");
}

BasisSpec FeatureGroup::basis() const {
    BasisSpec b;
    switch (extractor) {
        case Extractor::Polynomial: b.kind = BasisKind::Polynomial; break;
        case Extractor::Sinusoidal: b.kind = BasisKind::Sinusoidal; break;
        case Extractor::Exponential: b.kind = BasisKind::Exponential; break;
        case Extractor::Power: b.kind = BasisKind::Power; break;
        default: throw UsageError("feature group does not use a basis representation");
    }
    b.order = order;
    b.window_len = window_len;
    return b;
}

std::string FeatureGroup::label() const {
    std::string out;
    if (transform != "log") out += transform + "+";
    switch (extractor) {
        case Extractor::Polynomial: out += "poly" + std::to_string(order) + "-" + std::to_string(window_len); break;
        case Extractor::Sinusoidal: out += "sin-" + std::to_string(window_len); break;
        case Extractor::Exponential: out += "exp-" + std::to_string(window_len); break;
        case Extractor::Power: out += "power-" + std::to_string(window_len); break;
        case Extractor::IntensityRatio: out += "ratio-" + std::to_string(window_len); break;
        default: out += std::string(extractor_name(extractor)); break;
    }
    if (pca_k) out += "+pca" + std::to_string(*pca_k);
    return out;
}

void FeatureGroup::validate() const {
    if (transform != "log" && transform != "none") throw UsageError("transform must be 'log' or 'none'");
    if (is_basis(extractor)) basis().validate();
    if (extractor == Extractor::IntensityRatio && window_len < 1)
        throw UsageError("intensity-ratio window must be positive");
    if (pca_k && *pca_k < 1) throw UsageError("pca_k must be positive");
}

json group_to_json(const FeatureGroup& g) {
    json j = {{"transform", g.transform},
              {"extractor", extractor_name(g.extractor)},
              {"order", g.order},
              {"window_len", g.window_len}};
    j["pca_k"] = g.pca_k ? json(*g.pca_k) : json(nullptr);
    return j;
}

FeatureGroup group_from_json(const json& j) {
    if (!j.is_object()) throw UsageError("feature-group descriptor must be a JSON object");
    FeatureGroup g;
    try {
        g.extractor = parse_extractor(j.at("extractor").get<std::string>());
        if (g.extractor == Extractor::IntensityRatio) {
            g.transform = "none";
            g.window_len = 20;
        }
        if (j.contains("transform")) g.transform = j["transform"].get<std::string>();
        if (j.contains("order")) g.order = j["order"].get<int>();
        if (j.contains("window_len")) g.window_len = j["window_len"].get<int>();
        if (j.contains("pca_k") && !j["pca_k"].is_null()) g.pca_k = j["pca_k"].get<Index>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("invalid feature-group descriptor: ") + e.what());
    }
    g.validate();
    return g;
}

FeatureGroup load_group(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open feature-group descriptor " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("malformed feature-group descriptor " + path.string() + ": " + e.what());
    }
    return group_from_json(j);
}

std::vector<double> extract_features(std::span<const double> intensity, const physics::SpectralGrid& grid,
                                     const FeatureGroup& group, std::size_t* warnings) {
    std::vector<double> signal;
    if (group.transform == "log") {
        signal = log_transform(intensity);
    } else {
        signal.assign(intensity.begin(), intensity.end());
    }
    switch (group.extractor) {
        case Extractor::StatsWhole: return statistical_features(signal);
        case Extractor::StatsBands: return band_features(signal, grid, default_bands());
        case Extractor::StatsAgg: return aggregated_features(signal, grid, default_bands());
        case Extractor::IntensityRatio: return intensity_ratio_features(signal, group.window_len);
        default: break;
    }
    Representation rep = representation_features(signal, group.basis());
    if (warnings) *warnings += rep.warnings;
    return std::move(rep.coefficients);
}

Matrix extract_raw_features(const Matrix& spectra, const physics::SpectralGrid& grid, const FeatureGroup& group,
                            unsigned jobs, std::size_t* warnings) {
    group.validate();
    const auto n = static_cast<std::size_t>(spectra.rows());
    if (n == 0) throw UsageError("no spectra to featurize");
    std::vector<std::vector<double>> rows(n);
    std::vector<std::size_t> row_warnings(n, 0);
    parallel_for(n, jobs, [&](std::size_t i) {
        const Vector row = spectra.row(static_cast<Index>(i)).transpose();
        rows[i] = extract_features(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())), grid,
                                   group, &row_warnings[i]);
    });
    const auto cols = static_cast<Index>(rows.front().size());
    Matrix out(static_cast<Index>(n), cols);
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<Index>(rows[i].size()) != cols) throw NumericError("featurizer produced ragged rows");
        out.row(static_cast<Index>(i)) = Eigen::Map<const RowVector>(rows[i].data(), cols);
        if (warnings) *warnings += row_warnings[i];
    }
    return out;
}

FeatureTransform fit_feature_transform(const Matrix& raw, const std::vector<std::size_t>& train_rows,
                                       std::optional<Index> pca_k) {
    if (train_rows.empty()) throw UsageError("feature transform needs training rows");
    const Matrix train = select_rows(raw, train_rows);
    FeatureTransform t;
    if (pca_k) {
        if (*pca_k > raw.cols()) throw UsageError("pca_k exceeds the number of raw features");
        t.pca = fit_pca(train);
        t.pca_k = *pca_k;
        t.scaler = fit_scaler(pca_transform(*t.pca, train, t.pca_k), -1.0, 1.0);
    } else {
        t.scaler = fit_scaler(train, -1.0, 1.0);
    }
    return t;
}

FeatureTransform with_pca_k(const FeatureTransform& base, const Matrix& raw,
                            const std::vector<std::size_t>& train_rows, Index k) {
    if (!base.pca) throw UsageError("transform has no PCA step");
    FeatureTransform t;
    t.pca = base.pca;
    t.pca_k = k;
    t.scaler = fit_scaler(pca_transform(*t.pca, select_rows(raw, train_rows), k), -1.0, 1.0);
    return t;
}

Matrix apply_feature_transform(const FeatureTransform& t, const Matrix& raw) {
    if (t.pca) return t.scaler.apply(pca_transform(*t.pca, raw, t.pca_k));
    return t.scaler.apply(raw);
}

json transform_to_json(const FeatureTransform& t) {
    json j;
    if (t.pca) {
        const Index kept = std::min<Index>(t.pca_k, t.pca->components.rows());
        j["pca"] = {{"k", t.pca_k},
                    {"standardized", t.pca->standardized},
                    {"mean", vector_to_json(t.pca->mean)},
                    {"scale", vector_to_json(t.pca->scale)},
                    {"components", matrix_to_json(t.pca->components.topRows(kept))},
                    {"variances", vector_to_json(t.pca->variances.head(kept))}};
    } else {
        j["pca"] = nullptr;
    }
    j["scaler"] = {{"lo", t.scaler.lo},
                   {"hi", t.scaler.hi},
                   {"min", vector_to_json(t.scaler.col_min)},
                   {"max", vector_to_json(t.scaler.col_max)}};
    return j;
}

FeatureTransform transform_from_json(const json& j) {
    FeatureTransform t;
    try {
        if (!j.at("pca").is_null()) {
            const json& p = j["pca"];
            PcaModel m;
            m.standardized = p.at("standardized").get<bool>();
            m.mean = vector_from_json(p.at("mean"));
            m.scale = vector_from_json(p.at("scale"));
            m.components = matrix_from_json(p.at("components"));
            m.variances = vector_from_json(p.at("variances"));
            t.pca_k = p.at("k").get<Index>();
            if (m.scale.size() != m.mean.size() || (m.components.rows() > 0 && m.components.cols() != m.mean.size()))
                throw DataError("inconsistent PCA dimensions");
            t.pca = std::move(m);
        }
        const json& s = j.at("scaler");
        t.scaler.lo = s.at("lo").get<double>();
        t.scaler.hi = s.at("hi").get<double>();
        t.scaler.col_min = vector_from_json(s.at("min"));
        t.scaler.col_max = vector_from_json(s.at("max"));
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid feature transform: ") + e.what());
    }
    return t;
}

}  // namespace losight::features
