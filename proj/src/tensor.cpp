#include "relgraph/tensor.hpp"

namespace relgraph {

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols != b.rows) throw ShapeMismatchError("matmul: inner dimensions differ");
  Tensor c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (int k = 0; k < a.cols; ++k) {
      double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (int j = 0; j < b.cols; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

void add_matmul_a_bt(Tensor& c, const Tensor& a, const Tensor& b) {
  if (a.cols != b.cols) throw ShapeMismatchError("matmul_a_bt: inner dimensions differ");
  if (c.rows != a.rows || c.cols != b.rows)
    throw ShapeMismatchError("matmul_a_bt: output shape mismatch");
  for (int i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (int k = 0; k < b.rows; ++k) {
      const double* bk = b.row(k);
      double dot = 0.0;
      for (int j = 0; j < a.cols; ++j) dot += ai[j] * bk[j];
      ci[k] += dot;
    }
  }
}

void add_matmul_at_b(Tensor& c, const Tensor& a, const Tensor& b) {
  if (a.rows != b.rows) throw ShapeMismatchError("matmul_at_b: inner dimensions differ");
  if (c.rows != a.cols || c.cols != b.cols)
    throw ShapeMismatchError("matmul_at_b: output shape mismatch");
  for (int i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    const double* bi = b.row(i);
    for (int k = 0; k < a.cols; ++k) {
      double aik = ai[k];
      if (aik == 0.0) continue;
      double* ck = c.row(k);
      for (int j = 0; j < b.cols; ++j) ck[j] += aik * bi[j];
    }
  }
}

}  // namespace relgraph
