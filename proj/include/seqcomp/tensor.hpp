#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <span>
#include <vector>

namespace seqcomp {

// Dense row-major matrix of doubles. Everything in the toolkit is 64-bit:
// desk-scale shapes make precision cheap and keep gradient checks tight.
struct Tensor2D {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Tensor2D() = default;
  Tensor2D(int r, int c) : rows(r), cols(c), v(size_t(r) * size_t(c), 0.0) {}

  static Tensor2D zeros(int r, int c) { return Tensor2D(r, c); }

  double* row(int i) { return v.data() + size_t(i) * cols; }
  const double* row(int i) const { return v.data() + size_t(i) * cols; }
  std::span<double> row_span(int i) { return {row(i), size_t(cols)}; }
  std::span<const double> row_span(int i) const { return {row(i), size_t(cols)}; }

  double& at(int i, int j) { return v[size_t(i) * cols + j]; }
  double at(int i, int j) const { return v[size_t(i) * cols + j]; }

  void fill(double x) { std::fill(v.begin(), v.end(), x); }
  void resize(int r, int c) {
    rows = r;
    cols = c;
    v.assign(size_t(r) * size_t(c), 0.0);
  }
  size_t size() const { return v.size(); }
  bool same_shape(const Tensor2D& o) const { return rows == o.rows && cols == o.cols; }
};

// out = a * b
void matmul(const Tensor2D& a, const Tensor2D& b, Tensor2D& out);

// out = a * b^T  (a: n x d, b: m x d -> n x m)
void matmul_bt(const Tensor2D& a, const Tensor2D& b, Tensor2D& out);

// out += a^T * b  (a: n x d, b: n x e -> out d x e)
void matmul_at_accum(const Tensor2D& a, const Tensor2D& b, Tensor2D& out);

bool all_finite(const Tensor2D& t);

}  // namespace seqcomp
