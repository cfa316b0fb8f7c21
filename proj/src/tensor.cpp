#include "seqcomp/tensor.hpp"

namespace seqcomp {

void matmul(const Tensor2D& a, const Tensor2D& b, Tensor2D& out) {
  assert(a.cols == b.rows);
  out.resize(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* ar = a.row(i);
    double* outr = out.row(i);
    for (int k = 0; k < a.cols; ++k) {
      const double aik = ar[k];
      const double* br = b.row(k);
      for (int j = 0; j < b.cols; ++j) {
        outr[j] += aik * br[j];
      }
    }
  }
}

void matmul_bt(const Tensor2D& a, const Tensor2D& b, Tensor2D& out) {
  assert(a.cols == b.cols);
  out.resize(a.rows, b.rows);
  for (int i = 0; i < a.rows; ++i) {
    const double* ar = a.row(i);
    double* outr = out.row(i);
    for (int j = 0; j < b.rows; ++j) {
      const double* br = b.row(j);
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k) acc += ar[k] * br[k];
      outr[j] = acc;
    }
  }
}

void matmul_at_accum(const Tensor2D& a, const Tensor2D& b, Tensor2D& out) {
  assert(a.rows == b.rows);
  assert(out.rows == a.cols && out.cols == b.cols);
  for (int t = 0; t < a.rows; ++t) {
    const double* ar = a.row(t);
    const double* br = b.row(t);
    for (int k = 0; k < a.cols; ++k) {
      const double aik = ar[k];
      if (aik == 0.0) continue;
      double* outr = out.row(k);
      for (int j = 0; j < b.cols; ++j) outr[j] += aik * br[j];
    }
  }
}

bool all_finite(const Tensor2D& t) {
  for (double x : t.v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace seqcomp
