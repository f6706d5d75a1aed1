#pragma once

#include <vector>

#include "hfstrat/classifier.hpp"
#include "hfstrat/numerics.hpp"

namespace hfstrat {

enum class SvcKernel { Linear, Rbf };

/// Soft-margin support vector classifier trained by sequential minimal
/// optimization. Confidence is the raw margin, not a probability; the label
/// threshold is margin >= 0.
class SvcModel final : public Classifier {
public:
    SvcModel() = default;
    SvcModel(SvcKernel kernel, double gamma, std::vector<double> alpha,
             std::vector<int> signed_labels, Matrix support_vectors, double bias, double c,
             StandardizationParams standardization)
        : kernel_(kernel), gamma_(gamma), alpha_(std::move(alpha)),
          signed_labels_(std::move(signed_labels)), support_vectors_(std::move(support_vectors)),
          bias_(bias), c_(c), standardization_(std::move(standardization)) {}

    /// Raw margin sum_i alpha_i y_i K(s_i, x) + b on the standardized input.
    double confidence(std::span<const double> x) const override;
    int label(std::span<const double> x) const override {
        return confidence(x) >= 0.0 ? 1 : 0;
    }

    SvcKernel kernel() const { return kernel_; }
    double gamma() const { return gamma_; }
    const std::vector<double>& alpha() const { return alpha_; }
    const std::vector<int>& signed_labels() const { return signed_labels_; }
    const Matrix& support_vectors() const { return support_vectors_; }
    double bias() const { return bias_; }
    double c() const { return c_; }
    const StandardizationParams& standardization() const { return standardization_; }

private:
    SvcKernel kernel_ = SvcKernel::Linear;
    double gamma_ = 1.0;
    std::vector<double> alpha_;
    std::vector<int> signed_labels_;
    Matrix support_vectors_;  // standardized rows
    double bias_ = 0.0;
    double c_ = 1.0;
    StandardizationParams standardization_;
};

struct SvcTrainConfig {
    double c = 1.0;
    SvcKernel kernel = SvcKernel::Linear;
    double gamma = -1.0;   // <= 0 means 1 / cols
    double tol = 1e-3;     // KKT violation tolerance
    int max_passes = 200;  // cap on full sweeps
};

SvcModel train_svc(const Matrix& x, const std::vector<int>& y, const SvcTrainConfig& cfg = {});

}  // namespace hfstrat
