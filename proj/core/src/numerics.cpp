#include "hfstrat/numerics.hpp"

#include <stdexcept>

namespace hfstrat {

StandardizationParams standardize_fit(const Matrix& x,
                                      const std::vector<std::size_t>& numeric_cols) {
    if (x.rows() == 0 || x.cols() == 0) {
        throw std::invalid_argument("empty design matrix");
    }
    StandardizationParams p;
    p.means.assign(x.cols(), 0.0);
    p.scales.assign(x.cols(), 1.0);

    const double n = static_cast<double>(x.rows());
    for (std::size_t j : numeric_cols) {
        if (j >= x.cols()) {
            throw std::out_of_range("standardize_fit: column index out of range");
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) sum += x(i, j);
        const double mean = sum / n;
        double ss = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double d = x(i, j) - mean;
            ss += d * d;
        }
        const double var = ss / n;  // population variance
        p.means[j] = mean;
        p.scales[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return p;
}

StandardizationParams standardize_fit(const Matrix& x) {
    std::vector<std::size_t> all(x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) all[j] = j;
    return standardize_fit(x, all);
}

Matrix standardize_apply(const Matrix& x, const StandardizationParams& p) {
    if (x.cols() != p.means.size() || x.cols() != p.scales.size()) {
        throw std::invalid_argument("standardize_apply: column count mismatch");
    }
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            out(i, j) = (x(i, j) - p.means[j]) / p.scales[j];
        }
    }
    return out;
}

void standardize_row(std::vector<double>& row, const StandardizationParams& p) {
    if (row.size() != p.means.size()) {
        throw std::invalid_argument("standardize_row: column count mismatch");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
        row[j] = (row[j] - p.means[j]) / p.scales[j];
    }
}

}  // namespace hfstrat
