#include "hostnet/matrix.hpp"

#include <cmath>

#include "hostnet/errors.hpp"

namespace hostnet {

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw DimensionError("Matrix::from_rows: ragged input at row " + std::to_string(r));
    }
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool all_finite(const Matrix& m) { return all_finite(std::span<const double>(m.data())); }

}  // namespace hostnet
