#include "losight/ml/regressor.hpp"

#include <cmath>

#include "losight/core/error.hpp"
#include "losight/ml/blend.hpp"
#include "losight/ml/kernel_ridge.hpp"
#include "losight/ml/linear.hpp"
#include "losight/ml/mlp.hpp"
#include "losight/ml/rbfn.hpp"

namespace losight::ml {

using nlohmann::json;

namespace {

struct KindEntry {
    ModelKind kind;
    std::string_view name;
};

constexpr KindEntry kKinds[] = {
    {ModelKind::LinearRidge, "linear_ridge"}, {ModelKind::Mlp, "mlp"},   {ModelKind::Rbfn, "rbfn"},
    {ModelKind::KernelRidge, "kernel_ridge"}, {ModelKind::Blend, "blend"},
};

}  // namespace

std::string_view kind_name(ModelKind kind) {
    for (const auto& e : kKinds)
        if (e.kind == kind) return e.name;
    return "unknown";
}

ModelKind parse_kind(std::string_view name) {
    for (const auto& e : kKinds)
        if (e.name == name) return e.kind;
    throw UsageError("unknown model kind '" + std::string(name) + "'");
}

Matrix Regressor::predict(const Matrix& x) const {
    if (x.cols() != input_dim())
        throw UsageError("model expects " + std::to_string(input_dim()) + " input columns, got " +
                         std::to_string(x.cols()));
    const Index out_dim = output_dim();
    Matrix y(x.rows(), out_dim);
    Vector row(x.cols());
    Vector out(out_dim);
    for (Index i = 0; i < x.rows(); ++i) {
        row = x.row(i).transpose();
        predict_row(row.data(), out.data());
        y.row(i) = out.transpose();
    }
    return y;
}

json Regressor::to_json() const {
    json j;
    j["format"] = "losight-model";
    j["version"] = kModelFormatVersion;
    j["kind"] = kind_name(kind());
    j["dims"] = {{"inputs", input_dim()}, {"outputs", output_dim()}};
    j["hyperparameters"] = hyperparameters();
    j["parameters"] = parameters();
    j["seed"] = info.seed;
    json training = {{"epochs", info.epochs}, {"aborted_restarts", info.aborted_restarts}};
    training["validation_mse"] = std::isfinite(info.validation_mse) ? json(info.validation_mse) : json(nullptr);
    j["training"] = training;
    return j;
}

RegressorPtr regressor_from_json(const json& j) {
    std::shared_ptr<Regressor> model;
    try {
        if (j.value("format", "") != "losight-model") throw DataError("not a model document");
        if (j.at("version").get<int>() != kModelFormatVersion) throw DataError("unsupported model version");
        switch (parse_kind(j.at("kind").get<std::string>())) {
            case ModelKind::LinearRidge: model = LinearModel::from_json(j); break;
            case ModelKind::Mlp: model = MlpModel::from_json(j); break;
            case ModelKind::Rbfn: model = RbfnModel::from_json(j); break;
            case ModelKind::KernelRidge: model = KernelRidgeModel::from_json(j); break;
            case ModelKind::Blend: model = BlendModel::from_json(j); break;
        }
        const json& dims = j.at("dims");
        if (dims.at("inputs").get<Index>() != model->input_dim() ||
            dims.at("outputs").get<Index>() != model->output_dim())
            throw DataError("model dimensions do not match its parameters");
        model->info.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("training")) {
            const json& t = j["training"];
            model->info.epochs = t.value("epochs", 0);
            model->info.aborted_restarts = t.value("aborted_restarts", 0);
            if (t.contains("validation_mse") && !t["validation_mse"].is_null())
                model->info.validation_mse = t["validation_mse"].get<double>();
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid model document: ") + e.what());
    } catch (const UsageError& e) {
        throw DataError(std::string("invalid model document: ") + e.what());
    }
    return model;
}

double mean_squared_error(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("MSE operands differ in shape");
    if (a.size() == 0) throw UsageError("MSE of an empty matrix");
    double sum = 0.0;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i) {
            const double d = a(i, j) - b(i, j);
            sum += d * d;
        }
    return sum / static_cast<double>(a.size());
}

}  // namespace losight::ml
