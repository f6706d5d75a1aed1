#pragma once

#include <vector>

#include "hfstrat/classifier.hpp"
#include "hfstrat/numerics.hpp"

namespace hfstrat {

/// L2-regularized logistic regression. Inputs are standardized internally;
/// the stored parameters operate on raw (unstandardized) rows.
class LogisticModel final : public Classifier {
public:
    LogisticModel() = default;
    LogisticModel(std::vector<double> weights, double bias, double c,
                  StandardizationParams standardization)
        : weights_(std::move(weights)), bias_(bias), c_(c),
          standardization_(std::move(standardization)) {}

    double confidence(std::span<const double> x) const override;

    /// Linear score w.(x - mu)/sigma + b.
    double decision(std::span<const double> x) const;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    double reg_strength() const { return c_; }
    const StandardizationParams& standardization() const { return standardization_; }

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
    double c_ = 1.0;
    StandardizationParams standardization_;
};

struct LogisticTrainConfig {
    double c = 1.0;          // inverse regularization strength; penalty is |w|^2 / (2C)
    double tol = 1e-6;       // gradient max-norm stopping threshold
    int max_iter = 10000;
};

/// Loss and gradient of the regularized negative log-likelihood
///   L(w, b) = sum_i [softplus(z_i) - y_i z_i] + |w|^2 / (2C),  z = Xw + b
/// with the bias unregularized. X here is the already-standardized matrix.
struct LogisticObjective {
    double loss = 0.0;
    std::vector<double> grad_w;
    double grad_b = 0.0;
};
LogisticObjective logistic_loss_gradient(const Matrix& x_std, const std::vector<int>& y,
                                         const std::vector<double>& w, double b, double c);

/// Deterministic full-batch gradient descent with backtracking line search.
/// Stops when the gradient max-norm falls below tol or max_iter is reached.
/// A single-class y yields a constant-probability model (weights zero, bias
/// at the clamped log-odds of the base rate) with a warning.
LogisticModel train_logistic(const Matrix& x, const std::vector<int>& y,
                             const LogisticTrainConfig& cfg = {});

}  // namespace hfstrat
