#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hostnet {

using Vec = std::vector<double>;

/// Dense row-major matrix of 64-bit floats. All numeric state in the
/// library (node features, layer weights, gradients) lives in these.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Builds from a list of equally sized rows. Throws DimensionError on
  /// ragged input.
  static Matrix from_rows(const std::vector<Vec>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  Vec& data() { return data_; }
  const Vec& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vec data_;
};

bool all_finite(std::span<const double> values);
bool all_finite(const Matrix& m);

}  // namespace hostnet
