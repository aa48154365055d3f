#include "pattn/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace pattn {

double dot(ConstSpan a, ConstSpan b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(ConstSpan v) { return std::sqrt(dot(v, v)); }

double squared_distance(ConstSpan a, ConstSpan b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(ConstSpan a, ConstSpan b) { return std::sqrt(squared_distance(a, b)); }

void matvec(const Matrix& W, ConstSpan x, Vec& out) {
  out.resize(W.rows);
  for (std::size_t r = 0; r < W.rows; ++r) out[r] = dot(W.row(r), x);
}

void matvec_transpose(const Matrix& W, ConstSpan y, Vec& out) {
  out.assign(W.cols, 0.0);
  for (std::size_t r = 0; r < W.rows; ++r) axpy(y[r], W.row(r), out);
}

void add_outer(Matrix& A, ConstSpan u, ConstSpan v) {
  for (std::size_t r = 0; r < A.rows; ++r) axpy(u[r], v, A.row(r));
}

void axpy(double a, ConstSpan x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vec operator+(ConstSpan a, ConstSpan b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec operator-(ConstSpan a, ConstSpan b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec operator*(double a, ConstSpan x) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
  return r;
}

Vec solve2x2(const Matrix& A, ConstSpan b) {
  const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  if (std::abs(det) < 1e-300) throw std::domain_error("solve2x2: singular matrix");
  return {(A(1, 1) * b[0] - A(0, 1) * b[1]) / det,
          (A(0, 0) * b[1] - A(1, 0) * b[0]) / det};
}

bool all_finite(ConstSpan v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace pattn
