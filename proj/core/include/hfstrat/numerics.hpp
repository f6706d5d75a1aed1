#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hfstrat/matrix.hpp"

namespace hfstrat {

/// Per-column centering/scaling parameters. scales are strictly positive;
/// columns outside the fitted set carry the identity transform (0, 1).
struct StandardizationParams {
    std::vector<double> means;
    std::vector<double> scales;
};

/// Fit means and population standard deviations for the given columns.
/// Constant columns get scale 1 so apply() never divides by zero; columns
/// not listed in `numeric_cols` get mean 0, scale 1.
StandardizationParams standardize_fit(const Matrix& x,
                                      const std::vector<std::size_t>& numeric_cols);

/// Fit over every column.
StandardizationParams standardize_fit(const Matrix& x);

/// out[i][j] = (x[i][j] - means[j]) / scales[j]
Matrix standardize_apply(const Matrix& x, const StandardizationParams& p);

/// Standardize a single row in place.
void standardize_row(std::vector<double>& row, const StandardizationParams& p);

/// Logistic function, stable for |z| up to ~700 in either direction.
inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// Inverse of sigmoid on (0, 1).
inline double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace hfstrat
