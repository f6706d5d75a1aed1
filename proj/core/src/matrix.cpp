#include "hfstrat/matrix.hpp"

#include <cmath>

namespace hfstrat {

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const double* src = data_.data() + indices[r] * cols_;
        double* dst = out.data_.data() + r * cols_;
        for (std::size_t j = 0; j < cols_; ++j) dst[j] = src[j];
    }
    return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> indices) const {
    Matrix out(rows_, indices.size());
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < indices.size(); ++j) {
            out(i, j) = (*this)(i, indices[j]);
        }
    }
    return out;
}

}  // namespace hfstrat
