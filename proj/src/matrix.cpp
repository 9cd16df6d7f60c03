#include "elight/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elight {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul shape mismatch");
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t kk = 0; kk < a.cols; ++kk) {
      double v = a(i, kk);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) out(i, j) += v * b(kk, j);
    }
  return out;
}

double max_abs(const Matrix& m) {
  double peak = 0.0;
  for (double v : m.data) peak = std::max(peak, std::abs(v));
  return peak;
}

double relative_residual(const Matrix& got, const Matrix& want) {
  if (!got.same_shape(want)) throw std::invalid_argument("residual shape mismatch");
  double diff = 0.0;
  for (std::size_t i = 0; i < got.data.size(); ++i)
    diff = std::max(diff, std::abs(got.data[i] - want.data[i]));
  return diff / std::max(1.0, max_abs(want));
}

}  // namespace elight
