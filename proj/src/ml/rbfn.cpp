#include "losight/ml/rbfn.hpp"

#include <cmath>

#include "losight/core/error.hpp"
#include "losight/core/json_eigen.hpp"

namespace losight::ml {

using nlohmann::json;

RbfnModel::RbfnModel(Matrix centers, Matrix weights, Vector bias, double spread)
    : centers_(std::move(centers)), weights_(std::move(weights)), bias_(std::move(bias)), spread_(spread) {
    if (!(spread_ > 0.0)) throw UsageError("RBF spread must be positive");
    if (weights_.rows() != centers_.rows() || bias_.size() != weights_.cols())
        throw UsageError("inconsistent RBFN parameter shapes");
    if (!weights_.allFinite() || !bias_.allFinite()) throw NumericError("RBFN has non-finite weights");
}

void RbfnModel::predict_row(const double* x, double* out) const {
    const double a = (kRbfShape / spread_) * (kRbfShape / spread_);
    const Index d = centers_.cols();
    const Index m = weights_.cols();
    for (Index k = 0; k < m; ++k) out[k] = bias_(k);
    for (Index c = 0; c < centers_.rows(); ++c) {
        double r2 = 0.0;
        for (Index i = 0; i < d; ++i) {
            const double diff = x[i] - centers_(c, i);
            r2 += diff * diff;
        }
        const double phi = std::exp(-a * r2);
        for (Index k = 0; k < m; ++k) out[k] += weights_(c, k) * phi;
    }
}

json RbfnModel::hyperparameters() const { return {{"spread", spread_}, {"centers", centers_.rows()}}; }

json RbfnModel::parameters() const {
    return {{"centers", matrix_to_json(centers_)}, {"weights", matrix_to_json(weights_)}, {"bias", vector_to_json(bias_)}};
}

std::shared_ptr<RbfnModel> RbfnModel::from_json(const json& j) {
    const json& p = j.at("parameters");
    Matrix centers = matrix_from_json(p.at("centers"));
    Matrix weights = matrix_from_json(p.at("weights"));
    Vector bias = vector_from_json(p.at("bias"));
    if (centers.rows() == 0) centers.resize(0, j.at("dims").at("inputs").get<Index>());
    if (weights.rows() == 0) weights.resize(0, bias.size());
    return std::make_shared<RbfnModel>(std::move(centers), std::move(weights), std::move(bias),
                                       j.at("hyperparameters").at("spread").get<double>());
}

namespace {

/// Incremental orthogonal least squares over the design [1, phi_1, ..., phi_k].
class GreedyRbf {
public:
    GreedyRbf(const Matrix& x, const Matrix& y, double spread, Index max_centers)
        : x_(x), y_(y), a_((kRbfShape / spread) * (kRbfShape / spread)), n_(x.rows()) {
        const Index cap = max_centers + 1;
        q_.resize(n_, cap);
        r_ = Matrix::Zero(cap, cap);
        c_.resize(cap, y.cols());
        used_.assign(static_cast<std::size_t>(n_), false);
        add_column(Vector::Ones(n_));
        residual_ = y_ - q_.col(0) * c_.row(0);
        mse_ = residual_.squaredNorm() / static_cast<double>(y_.size());
    }

    /// Adds the next center; false when no admissible candidate remains.
    bool step() {
        const Vector norms = residual_.rowwise().squaredNorm();
        for (;;) {
            Index best = -1;
            for (Index i = 0; i < n_; ++i) {
                if (used_[static_cast<std::size_t>(i)]) continue;
                if (best < 0 || norms(i) > norms(best)) best = i;
            }
            if (best < 0) return false;
            used_[static_cast<std::size_t>(best)] = true;
            const Vector r2 = (x_.rowwise() - x_.row(best)).rowwise().squaredNorm();
            bool duplicate = false;
            for (Index c : order_)
                if (r2(c) == 0.0) duplicate = true;
            if (duplicate) continue;
            const Vector phi = (-a_ * r2.array()).exp().matrix();
            if (!add_column(phi)) continue;
            order_.push_back(best);
            const Index k = cols_ - 1;
            residual_ -= q_.col(k) * c_.row(k);
            mse_ = residual_.squaredNorm() / static_cast<double>(y_.size());
            return true;
        }
    }

    double mse() const { return mse_; }
    const std::vector<Index>& order() const { return order_; }

    /// Weights for the first k centers: solves the leading triangle of R.
    std::shared_ptr<RbfnModel> model(Index k, double spread) const {
        const Index p = k + 1;
        const Matrix coef = r_.topLeftCorner(p, p).triangularView<Eigen::Upper>().solve(c_.topRows(p));
        Matrix centers(k, x_.cols());
        for (Index c = 0; c < k; ++c) centers.row(c) = x_.row(order_[static_cast<std::size_t>(c)]);
        Vector bias = coef.row(0).transpose();
        Matrix weights = coef.bottomRows(k);
        return std::make_shared<RbfnModel>(std::move(centers), std::move(weights), std::move(bias), spread);
    }

private:
    bool add_column(const Vector& v0) {
        Vector v = v0;
        Vector coeff = Vector::Zero(cols_);
        for (int pass = 0; pass < 2 && cols_ > 0; ++pass) {
            const Vector proj = q_.leftCols(cols_).transpose() * v;
            v -= q_.leftCols(cols_) * proj;
            coeff += proj;
        }
        const double norm = v.norm();
        if (!(norm > 1e-8 * v0.norm())) return false;
        q_.col(cols_) = v / norm;
        r_.col(cols_).head(cols_) = coeff;
        r_(cols_, cols_) = norm;
        c_.row(cols_) = q_.col(cols_).transpose() * y_;
        ++cols_;
        return true;
    }

    const Matrix& x_;
    const Matrix& y_;
    double a_;
    Index n_;
    Matrix q_, r_, c_;
    Index cols_ = 0;
    Matrix residual_;
    double mse_ = 0.0;
    std::vector<bool> used_;
    std::vector<Index> order_;
};

void check_inputs(const Matrix& x, const Matrix& y, double spread, Index max_centers) {
    if (x.rows() != y.rows()) throw UsageError("X and Y row counts differ");
    if (x.rows() < 1) throw UsageError("RBFN needs at least one row");
    if (!(spread > 0.0)) throw UsageError("RBF spread must be positive");
    if (max_centers < 1 || max_centers > x.rows()) throw UsageError("max_centers must be in [1, rows]");
}

bool converged(double before, double after) {
    return after <= 0.0 || before - after < 1e-8 * before;
}

}  // namespace

std::shared_ptr<RbfnModel> train_rbfn(const Matrix& x, const Matrix& y, double spread, Index max_centers,
                                      RbfnTrace* trace) {
    check_inputs(x, y, spread, max_centers);
    GreedyRbf g(x, y, spread, max_centers);
    std::vector<double> history;
    while (static_cast<Index>(g.order().size()) < max_centers) {
        const double before = g.mse();
        if (!g.step()) break;
        history.push_back(g.mse());
        if (converged(before, g.mse())) break;
    }
    if (trace) {
        trace->order = g.order();
        trace->train_mse = history;
    }
    auto model = g.model(static_cast<Index>(g.order().size()), spread);
    model->info.epochs = static_cast<int>(g.order().size());
    return model;
}

std::shared_ptr<RbfnModel> train_rbfn_validated(const Matrix& x, const Matrix& y, const Matrix& xval,
                                                const Matrix& yval, double spread, Index max_centers) {
    check_inputs(x, y, spread, max_centers);
    GreedyRbf g(x, y, spread, max_centers);
    std::shared_ptr<RbfnModel> best;
    double best_mse = std::numeric_limits<double>::infinity();
    auto consider = [&] {
        auto m = g.model(static_cast<Index>(g.order().size()), spread);
        const double v = mean_squared_error(m->predict(xval), yval);
        if (v < best_mse) {
            best_mse = v;
            best = std::move(m);
        }
    };
    Index next_checkpoint = 1;
    bool stopped = false;
    while (!stopped && static_cast<Index>(g.order().size()) < max_centers) {
        const double before = g.mse();
        if (!g.step()) break;
        stopped = converged(before, g.mse());
        const auto k = static_cast<Index>(g.order().size());
        if (k >= next_checkpoint || stopped || k == max_centers) {
            consider();
            while (next_checkpoint <= k) next_checkpoint = std::max<Index>(next_checkpoint + 1, next_checkpoint * 3 / 2);
        }
    }
    if (!best) consider();
    best->info.epochs = static_cast<int>(best->centers().rows());
    best->info.validation_mse = best_mse;
    return best;
}

}  // namespace losight::ml
