#include "losight/ml/mlp.hpp"

#include <cmath>
#include <numeric>

#include "losight/core/error.hpp"
#include "losight/core/json_eigen.hpp"
#include "losight/core/parallel.hpp"
#include "losight/core/random.hpp"

namespace losight::ml {

using nlohmann::json;

void MlpConfig::validate() const {
    if (hidden_units < 1) throw UsageError("hidden_units must be at least 1");
    if (restarts < 1) throw UsageError("restarts must be at least 1");
    if (max_epochs < 1) throw UsageError("max_epochs must be at least 1");
    if (patience < 1) throw UsageError("patience must be at least 1");
    if (batch_size < 1) throw UsageError("batch_size must be at least 1");
    if (!(learning_rate > 0.0)) throw UsageError("learning_rate must be positive");
}

json mlp_config_to_json(const MlpConfig& c) {
    return {{"hidden_units", c.hidden_units}, {"max_epochs", c.max_epochs},     {"patience", c.patience},
            {"learning_rate", c.learning_rate}, {"batch_size", c.batch_size}, {"restarts", c.restarts},
            {"seed", c.seed}};
}

MlpConfig mlp_config_from_json(const json& j, MlpConfig c) {
    c.hidden_units = j.value("hidden_units", c.hidden_units);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.patience = j.value("patience", c.patience);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.restarts = j.value("restarts", c.restarts);
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

bool MlpParams::all_finite() const {
    return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite();
}

LossGradient loss_and_gradient(const MlpParams& p, const Matrix& x, const Matrix& y) {
    const double scale = 1.0 / static_cast<double>(x.rows() * y.cols());
    Matrix z = x * p.w1.transpose();
    z.rowwise() += p.b1.transpose();
    const Matrix h = z.array().tanh().matrix();
    Matrix out = h * p.w2.transpose();
    out.rowwise() += p.b2.transpose();
    const Matrix err = out - y;

    LossGradient r;
    r.loss = err.squaredNorm() * scale;
    const Matrix d_out = 2.0 * scale * err;
    r.grad.w2 = d_out.transpose() * h;
    r.grad.b2 = d_out.colwise().sum().transpose();
    const Matrix d_z = ((d_out * p.w2).array() * (1.0 - h.array().square())).matrix();
    r.grad.w1 = d_z.transpose() * x;
    r.grad.b1 = d_z.colwise().sum().transpose();
    return r;
}

MlpParams init_mlp(Index inputs, Index hidden, Index outputs, std::uint64_t seed) {
    Rng rng(seed);
    MlpParams p;
    const double a1 = 1.0 / std::sqrt(static_cast<double>(inputs));
    const double a2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    p.w1.resize(hidden, inputs);
    for (Index j = 0; j < inputs; ++j)
        for (Index i = 0; i < hidden; ++i) p.w1(i, j) = rng.uniform(-a1, a1);
    p.b1 = Vector::Zero(hidden);
    p.w2.resize(outputs, hidden);
    for (Index j = 0; j < hidden; ++j)
        for (Index i = 0; i < outputs; ++i) p.w2(i, j) = rng.uniform(-a2, a2);
    p.b2 = Vector::Zero(outputs);
    return p;
}

MlpModel::MlpModel(MlpParams params, MlpConfig cfg) : params_(std::move(params)), cfg_(cfg) {
    if (params_.b1.size() != params_.w1.rows() || params_.w2.cols() != params_.w1.rows() ||
        params_.b2.size() != params_.w2.rows())
        throw UsageError("inconsistent MLP parameter shapes");
    if (!params_.all_finite()) throw NumericError("MLP has non-finite parameters");
}

void MlpModel::predict_row(const double* x, double* out) const {
    const Index d = params_.w1.cols();
    const Index hidden = params_.w1.rows();
    const Index m = params_.w2.rows();
    std::vector<double> h(static_cast<std::size_t>(hidden));
    for (Index u = 0; u < hidden; ++u) {
        double s = params_.b1(u);
        for (Index i = 0; i < d; ++i) s += params_.w1(u, i) * x[i];
        h[static_cast<std::size_t>(u)] = std::tanh(s);
    }
    for (Index k = 0; k < m; ++k) {
        double s = params_.b2(k);
        for (Index u = 0; u < hidden; ++u) s += params_.w2(k, u) * h[static_cast<std::size_t>(u)];
        out[k] = s;
    }
}

json MlpModel::hyperparameters() const { return mlp_config_to_json(cfg_); }

json MlpModel::parameters() const {
    return {{"w1", matrix_to_json(params_.w1)},
            {"b1", vector_to_json(params_.b1)},
            {"w2", matrix_to_json(params_.w2)},
            {"b2", vector_to_json(params_.b2)}};
}

std::shared_ptr<MlpModel> MlpModel::from_json(const json& j) {
    const json& p = j.at("parameters");
    MlpParams params{matrix_from_json(p.at("w1")), vector_from_json(p.at("b1")), matrix_from_json(p.at("w2")),
                     vector_from_json(p.at("b2"))};
    return std::make_shared<MlpModel>(std::move(params), mlp_config_from_json(j.at("hyperparameters")));
}

namespace {

struct Adam {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double lr;
    long step = 0;
    MlpParams m, v;

    Adam(const MlpParams& shape, double learning_rate) : lr(learning_rate) {
        m = {Matrix::Zero(shape.w1.rows(), shape.w1.cols()), Vector::Zero(shape.b1.size()),
             Matrix::Zero(shape.w2.rows(), shape.w2.cols()), Vector::Zero(shape.b2.size())};
        v = m;
    }

    template <typename P, typename G, typename S>
    void update(P& param, const G& grad, S& mom, S& var, double c1, double c2) {
        mom = beta1 * mom + (1.0 - beta1) * grad;
        var = beta2 * var + (1.0 - beta2) * grad.cwiseProduct(grad);
        param.array() -= lr * (mom.array() / c1) / ((var.array() / c2).sqrt() + eps);
    }

    void apply(MlpParams& p, const MlpParams& g) {
        ++step;
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
        update(p.w1, g.w1, m.w1, v.w1, c1, c2);
        update(p.b1, g.b1, m.b1, v.b1, c1, c2);
        update(p.w2, g.w2, m.w2, v.w2, c1, c2);
        update(p.b2, g.b2, m.b2, v.b2, c1, c2);
    }
};

double validation_mse(const MlpParams& p, const MlpConfig& cfg, const Matrix& xval, const Matrix& yval) {
    if (!p.all_finite()) return std::numeric_limits<double>::infinity();
    return mean_squared_error(MlpModel(p, cfg).predict(xval), yval);
}

struct RestartOutcome {
    RestartSummary summary;
    MlpParams best;
    MlpParams last;
};

RestartOutcome run_restart(const Matrix& x, const Matrix& y, const Matrix& xval, const Matrix& yval,
                           const MlpConfig& cfg, std::uint64_t seed) {
    RestartOutcome r;
    r.summary.seed = seed;
    MlpParams p = init_mlp(x.cols(), cfg.hidden_units, y.cols(), seed);
    Rng rng(derive_seed(seed, "batches"));
    Adam adam(p, cfg.learning_rate);
    std::vector<Index> order(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), Index{0});
    const Index batch = std::min<Index>(cfg.batch_size, x.rows());

    r.best = p;
    r.summary.best_validation_mse = validation_mse(p, cfg, xval, yval);
    int stale = 0;
    Matrix xb, yb;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        rng.shuffle(order.begin(), order.end());
        for (Index start = 0; start < x.rows(); start += batch) {
            const Index len = std::min<Index>(batch, x.rows() - start);
            xb.resize(len, x.cols());
            yb.resize(len, y.cols());
            for (Index i = 0; i < len; ++i) {
                xb.row(i) = x.row(order[static_cast<std::size_t>(start + i)]);
                yb.row(i) = y.row(order[static_cast<std::size_t>(start + i)]);
            }
            const LossGradient lg = loss_and_gradient(p, xb, yb);
            if (!std::isfinite(lg.loss) || !lg.grad.all_finite()) {
                r.summary.aborted = true;
                r.summary.epochs = epoch;
                return r;
            }
            adam.apply(p, lg.grad);
        }
        r.summary.epochs = epoch;
        const double val = validation_mse(p, cfg, xval, yval);
        if (!std::isfinite(val)) {
            r.summary.aborted = true;
            return r;
        }
        if (val < r.summary.best_validation_mse) {
            r.summary.best_validation_mse = val;
            r.summary.best_epoch = epoch;
            r.best = p;
            stale = 0;
        } else if (++stale >= cfg.patience) {
            break;
        }
    }
    r.last = p;
    return r;
}

}  // namespace

MlpResult train_mlp(const Matrix& x, const Matrix& y, const Matrix& xval, const Matrix& yval, const MlpConfig& cfg,
                    unsigned jobs) {
    cfg.validate();
    if (x.rows() != y.rows() || xval.rows() != yval.rows()) throw UsageError("feature and target row counts differ");
    if (x.cols() != xval.cols() || y.cols() != yval.cols()) throw UsageError("train and validation shapes differ");
    if (x.rows() < 1 || xval.rows() < 1) throw UsageError("MLP training needs train and validation rows");

    const auto n = static_cast<std::size_t>(cfg.restarts);
    std::vector<RestartOutcome> outcomes(n);
    parallel_for(n, jobs, [&](std::size_t r) {
        outcomes[r] = run_restart(x, y, xval, yval, cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    });

    MlpResult result;
    int aborted = 0;
    std::size_t chosen = n;
    for (std::size_t r = 0; r < n; ++r) {
        result.restarts.push_back(outcomes[r].summary);
        if (outcomes[r].summary.aborted) {
            ++aborted;
            continue;
        }
        if (chosen == n ||
            outcomes[r].summary.best_validation_mse < outcomes[chosen].summary.best_validation_mse)
            chosen = r;
    }
    if (chosen == n) throw NumericError("every MLP restart produced a non-finite loss");

    const RestartOutcome& best = outcomes[chosen];
    result.model = std::make_shared<MlpModel>(best.best, cfg);
    result.model->info = {best.summary.seed, best.summary.best_epoch, best.summary.best_validation_mse, aborted};
    result.final_epoch = std::make_shared<MlpModel>(best.last, cfg);
    result.final_epoch->info = {best.summary.seed, best.summary.epochs,
                                validation_mse(best.last, cfg, xval, yval), aborted};
    return result;
}

}  // namespace losight::ml
