#pragma once

#include <cstddef>
#include <vector>

namespace elight {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
  bool operator==(const Matrix& o) const = default;
};

Matrix matmul(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& m);

/// max|got - want| / max(1, max|want|)
double relative_residual(const Matrix& got, const Matrix& want);

}  // namespace elight
