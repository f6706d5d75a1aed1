#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hfstrat/matrix.hpp"

namespace hfstrat {

/// Shared predict/confidence contract. For probabilistic models the label is
/// confidence >= 0.5; models exposing an uncalibrated score (the SVC margin)
/// override label() with their own threshold at 0.
class Classifier {
public:
    virtual ~Classifier() = default;

    /// Probability of class 1, or a raw score where documented.
    virtual double confidence(std::span<const double> x) const = 0;

    virtual int label(std::span<const double> x) const {
        return confidence(x) >= 0.5 ? 1 : 0;
    }

    std::vector<int> predict_labels(const Matrix& x) const {
        std::vector<int> out(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) out[i] = label(x.row(i));
        return out;
    }

    std::vector<double> predict_confidences(const Matrix& x) const {
        std::vector<double> out(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) out[i] = confidence(x.row(i));
        return out;
    }
};

using ClassifierPtr = std::unique_ptr<Classifier>;

}  // namespace hfstrat
