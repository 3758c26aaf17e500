#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string_view>

#include <json.hpp>

#include "losight/core/matrix.hpp"

namespace losight::ml {

enum class ModelKind { LinearRidge, Mlp, Rbfn, KernelRidge, Blend };

std::string_view kind_name(ModelKind kind);
ModelKind parse_kind(std::string_view name);

struct TrainingInfo {
    std::uint64_t seed = 0;
    int epochs = 0;
    double validation_mse = std::numeric_limits<double>::quiet_NaN();
    int aborted_restarts = 0;
};

inline constexpr int kModelFormatVersion = 1;

/// Maps feature rows to target rows. Prediction evaluates each row with fixed
/// scalar loops, so a batch predict equals row-by-row predict bitwise.
class Regressor {
public:
    virtual ~Regressor() = default;

    virtual ModelKind kind() const = 0;
    virtual Index input_dim() const = 0;
    virtual Index output_dim() const = 0;
    virtual void predict_row(const double* x, double* out) const = 0;

    Matrix predict(const Matrix& x) const;

    virtual nlohmann::json hyperparameters() const = 0;
    virtual nlohmann::json parameters() const = 0;

    /// {format, version, kind, dims, hyperparameters, parameters, seed, training}
    nlohmann::json to_json() const;

    TrainingInfo info;
};

using RegressorPtr = std::shared_ptr<const Regressor>;

RegressorPtr regressor_from_json(const nlohmann::json& j);

/// Mean over every entry of (a - b)^2.
double mean_squared_error(const Matrix& a, const Matrix& b);

}  // namespace losight::ml
