#pragma once

#include <cstddef>
#include <vector>

#include "relgraph/errors.hpp"

namespace relgraph {

// Dense row-major matrix of doubles. Everything the model touches is 2-D;
// scalars are 1x1 and per-channel vectors are 1xC.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0) {}

  static Tensor zeros(int r, int c) { return Tensor(r, c); }
  static Tensor full(int r, int c, double value) {
    Tensor t(r, c);
    t.v.assign(t.v.size(), value);
    return t;
  }

  size_t size() const { return v.size(); }
  bool empty() const { return v.empty(); }
  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }

  double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
  double* row(int r) { return v.data() + static_cast<size_t>(r) * cols; }
  const double* row(int r) const { return v.data() + static_cast<size_t>(r) * cols; }
};

// C = A * B.
Tensor matmul(const Tensor& a, const Tensor& b);

// C += A * B^T (used for input gradients: dX = dY * W^T).
void add_matmul_a_bt(Tensor& c, const Tensor& a, const Tensor& b);

// C += A^T * B (used for weight gradients: dW = X^T * dY).
void add_matmul_at_b(Tensor& c, const Tensor& a, const Tensor& b);

}  // namespace relgraph
