#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pattn {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;

/// Dense row-major matrix; deliberately minimal, sized for small networks.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  ConstSpan row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

double dot(ConstSpan a, ConstSpan b);
double norm(ConstSpan v);
double distance(ConstSpan a, ConstSpan b);
double squared_distance(ConstSpan a, ConstSpan b);

/// out = W x  (out resized to W.rows)
void matvec(const Matrix& W, ConstSpan x, Vec& out);
/// out = W^T y  (out resized to W.cols)
void matvec_transpose(const Matrix& W, ConstSpan y, Vec& out);
/// A += u v^T
void add_outer(Matrix& A, ConstSpan u, ConstSpan v);
/// y += a * x
void axpy(double a, ConstSpan x, std::span<double> y);

Vec operator+(ConstSpan a, ConstSpan b);
Vec operator-(ConstSpan a, ConstSpan b);
Vec operator*(double a, ConstSpan x);

/// Solves A x = b for a 2x2 system; throws std::domain_error if singular
/// (|det| below 1e-300).
Vec solve2x2(const Matrix& A, ConstSpan b);

bool all_finite(ConstSpan v);

}  // namespace pattn
