#include "hfstrat/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hfstrat/log.hpp"

namespace hfstrat {

double LogisticModel::decision(std::span<const double> x) const {
    if (x.size() != weights_.size()) {
        throw std::invalid_argument("logistic: input width does not match model");
    }
    double z = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        z += weights_[j] * (x[j] - standardization_.means[j]) / standardization_.scales[j];
    }
    return z;
}

double LogisticModel::confidence(std::span<const double> x) const {
    return sigmoid(decision(x));
}

LogisticObjective logistic_loss_gradient(const Matrix& x_std, const std::vector<int>& y,
                                         const std::vector<double>& w, double b, double c) {
    const std::size_t n = x_std.rows();
    const std::size_t d = x_std.cols();
    LogisticObjective obj;
    obj.grad_w.assign(d, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const auto row = x_std.row(i);
        double z = b;
        for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
        // softplus(z) - y z, computed stably
        obj.loss += std::max(z, 0.0) - y[i] * z + std::log1p(std::exp(-std::abs(z)));
        const double residual = sigmoid(z) - y[i];
        for (std::size_t j = 0; j < d; ++j) obj.grad_w[j] += residual * row[j];
        obj.grad_b += residual;
    }
    double wnorm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        wnorm2 += w[j] * w[j];
        obj.grad_w[j] += w[j] / c;
    }
    obj.loss += wnorm2 / (2.0 * c);
    return obj;
}

LogisticModel train_logistic(const Matrix& x, const std::vector<int>& y,
                             const LogisticTrainConfig& cfg) {
    if (x.rows() != y.size()) throw std::invalid_argument("train_logistic: size mismatch");
    if (x.rows() == 0) throw std::invalid_argument("empty design matrix");
    if (cfg.c <= 0.0) throw std::invalid_argument("train_logistic: C must be positive");
    if (!x.all_finite()) throw std::invalid_argument("train_logistic: non-finite feature value");

    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    std::size_t positives = 0;
    for (int v : y) {
        if (v != 0 && v != 1) throw std::invalid_argument("train_logistic: labels must be 0/1");
        positives += v;
    }

    auto params = standardize_fit(x);

    if (positives == 0 || positives == n) {
        HFSTRAT_WARN("train_logistic: single-class targets, returning constant model");
        const double rate = std::clamp(static_cast<double>(positives) / n, 1e-12, 1.0 - 1e-12);
        return LogisticModel(std::vector<double>(d, 0.0), logit(rate), cfg.c, params);
    }

    const Matrix xs = standardize_apply(x, params);
    std::vector<double> w(d, 0.0);
    double b = 0.0;

    auto obj = logistic_loss_gradient(xs, y, w, b, cfg.c);
    double step = 1.0;
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        double gmax = std::abs(obj.grad_b);
        double gnorm2 = obj.grad_b * obj.grad_b;
        for (double g : obj.grad_w) {
            gmax = std::max(gmax, std::abs(g));
            gnorm2 += g * g;
        }
        if (gmax < cfg.tol) break;

        // Backtracking line search on the steepest descent direction.
        constexpr double kArmijo = 1e-4;
        constexpr double kShrink = 0.5;
        step = std::min(step * 2.0, 1.0);
        std::vector<double> w_next(d);
        double b_next = 0.0;
        LogisticObjective next;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t j = 0; j < d; ++j) w_next[j] = w[j] - step * obj.grad_w[j];
            b_next = b - step * obj.grad_b;
            next = logistic_loss_gradient(xs, y, w_next, b_next, cfg.c);
            if (next.loss <= obj.loss - kArmijo * step * gnorm2) {
                moved = true;
                break;
            }
            step *= kShrink;
        }
        if (!moved) break;  // step underflow; gradient tolerance unreachable
        w = std::move(w_next);
        b = b_next;
        obj = std::move(next);
    }

    return LogisticModel(std::move(w), b, cfg.c, std::move(params));
}

}  // namespace hfstrat
