#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hfstrat {

/// Dense row-major matrix of doubles. The only linear algebra this project
/// needs is row access and matvec-style loops, so no decompositions live here.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("matrix data length does not match rows*cols");
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_.data() + i * cols_, cols_);
    }
    std::span<double> row(std::size_t i) {
        return std::span<double>(data_.data() + i * cols_, cols_);
    }

    const std::vector<double>& data() const { return data_; }

    /// True when every entry is finite.
    bool all_finite() const;

    /// Copy of the rows named by `indices`, in that order.
    Matrix select_rows(std::span<const std::size_t> indices) const;

    /// Copy of the columns named by `indices`, in that order.
    Matrix select_cols(std::span<const std::size_t> indices) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Gather elements of `v` at `indices`.
template <typename T>
std::vector<T> select(const std::vector<T>& v, std::span<const std::size_t> indices) {
    std::vector<T> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(v[i]);
    return out;
}

}  // namespace hfstrat
