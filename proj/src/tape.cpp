#include "relgraph/tape.hpp"

#include <algorithm>
#include <cmath>

namespace relgraph {

SegmentMap SegmentMap::from_assignments(const std::vector<int>& segment_of, int n_segments) {
  SegmentMap m;
  m.n_rows = static_cast<int>(segment_of.size());
  m.n_segments = n_segments;
  m.rows_of.assign(static_cast<size_t>(n_segments), {});
  for (int r = 0; r < m.n_rows; ++r) {
    int s = segment_of[static_cast<size_t>(r)];
    if (s < 0 || s >= n_segments) throw Error("segment assignment out of range");
    m.rows_of[static_cast<size_t>(s)].push_back(r);
  }
  return m;
}

Tape::Ref Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<Ref>(nodes_.size() - 1);
}

Tensor& Tape::grad_of(int id) {
  Node& n = nodes_[static_cast<size_t>(id)];
  if (!n.grad.same_shape(n.value)) n.grad = Tensor::zeros(n.value.rows, n.value.cols);
  return n.grad;
}

const Tensor& Tape::grad(Ref r) const {
  const Node& n = nodes_[static_cast<size_t>(r)];
  return n.grad.same_shape(n.value) ? n.grad : empty_grad_;
}

Tape::Ref Tape::leaf(Tensor value) {
  Node n;
  n.op = Op::Leaf;
  n.value = std::move(value);
  return push(std::move(n));
}

Tape::Ref Tape::affine(Ref x, Ref w, Ref b) {
  const Tensor& xv = value(x);
  const Tensor& wv = value(w);
  const Tensor& bv = value(b);
  if (xv.cols != wv.rows) throw ShapeMismatchError("affine: input width does not match weight");
  if (bv.rows != 1 || bv.cols != wv.cols)
    throw ShapeMismatchError("affine: bias must be 1 x output width");
  Node n;
  n.op = Op::Affine;
  n.args = {x, w, b};
  n.value = matmul(xv, wv);
  for (int r = 0; r < n.value.rows; ++r) {
    double* row = n.value.row(r);
    for (int c = 0; c < n.value.cols; ++c) row[c] += bv.v[static_cast<size_t>(c)];
  }
  return push(std::move(n));
}

Tape::Ref Tape::relu(Ref x) {
  Node n;
  n.op = Op::Relu;
  n.args = {x};
  n.value = value(x);
  for (double& d : n.value.v) d = d > 0 ? d : 0.0;
  return push(std::move(n));
}

Tape::Ref Tape::add(Ref x, Ref y) {
  if (!value(x).same_shape(value(y))) throw ShapeMismatchError("add: shapes differ");
  Node n;
  n.op = Op::Add;
  n.args = {x, y};
  n.value = value(x);
  const Tensor& yv = value(y);
  for (size_t i = 0; i < n.value.v.size(); ++i) n.value.v[i] += yv.v[i];
  return push(std::move(n));
}

Tape::Ref Tape::add_row_broadcast(Ref x, Ref b) {
  const Tensor& xv = value(x);
  const Tensor& bv = value(b);
  if (bv.rows != 1 || bv.cols != xv.cols)
    throw ShapeMismatchError("add_row_broadcast: bias must be 1 x width");
  Node n;
  n.op = Op::AddRowBroadcast;
  n.args = {x, b};
  n.value = xv;
  for (int r = 0; r < n.value.rows; ++r) {
    double* row = n.value.row(r);
    for (int c = 0; c < n.value.cols; ++c) row[c] += bv.v[static_cast<size_t>(c)];
  }
  return push(std::move(n));
}

Tape::Ref Tape::concat_cols(const std::vector<Ref>& parts) {
  if (parts.empty()) throw Error("concat_cols: no parts");
  int rows = value(parts[0]).rows;
  int cols = 0;
  for (Ref p : parts) {
    if (value(p).rows != rows) throw ShapeMismatchError("concat_cols: row counts differ");
    cols += value(p).cols;
  }
  Node n;
  n.op = Op::ConcatCols;
  n.args.assign(parts.begin(), parts.end());
  n.value = Tensor::zeros(rows, cols);
  int offset = 0;
  for (Ref p : parts) {
    const Tensor& pv = value(p);
    for (int r = 0; r < rows; ++r)
      std::copy(pv.row(r), pv.row(r) + pv.cols, n.value.row(r) + offset);
    offset += pv.cols;
  }
  return push(std::move(n));
}

Tape::Ref Tape::slice_cols(Ref x, int begin, int end) {
  const Tensor& xv = value(x);
  if (begin < 0 || end > xv.cols || begin >= end)
    throw ShapeMismatchError("slice_cols: bounds out of range");
  Node n;
  n.op = Op::SliceCols;
  n.args = {x};
  n.begin = begin;
  n.end = end;
  n.value = Tensor::zeros(xv.rows, end - begin);
  for (int r = 0; r < xv.rows; ++r)
    std::copy(xv.row(r) + begin, xv.row(r) + end, n.value.row(r));
  return push(std::move(n));
}

Tape::Ref Tape::gather_rows(Ref x, std::vector<int> index) {
  const Tensor& xv = value(x);
  Node n;
  n.op = Op::GatherRows;
  n.args = {x};
  n.value = Tensor::zeros(static_cast<int>(index.size()), xv.cols);
  for (size_t r = 0; r < index.size(); ++r) {
    int src = index[r];
    if (src < 0 || src >= xv.rows) throw Error("gather_rows: index out of range");
    std::copy(xv.row(src), xv.row(src) + xv.cols, n.value.row(static_cast<int>(r)));
  }
  n.index = std::move(index);
  return push(std::move(n));
}

Tape::Ref Tape::scale_rows(Ref x, std::vector<double> scale) {
  const Tensor& xv = value(x);
  if (static_cast<int>(scale.size()) != xv.rows)
    throw ShapeMismatchError("scale_rows: one scale per row required");
  Node n;
  n.op = Op::ScaleRows;
  n.args = {x};
  n.value = xv;
  for (int r = 0; r < xv.rows; ++r) {
    double s = scale[static_cast<size_t>(r)];
    double* row = n.value.row(r);
    for (int c = 0; c < xv.cols; ++c) row[c] *= s;
  }
  n.scale = std::move(scale);
  return push(std::move(n));
}

Tape::Ref Tape::segment_stats(Ref x, const SegmentMap& map, double eps) {
  const Tensor& xv = value(x);
  if (xv.rows != map.n_rows) throw ShapeMismatchError("segment_stats: row count mismatch");
  int c = xv.cols;
  Node n;
  n.op = Op::SegmentStats;
  n.args = {x};
  n.segments = &map;
  n.eps = eps;
  n.value = Tensor::zeros(map.n_segments, 4 * c);
  for (int s = 0; s < map.n_segments; ++s) {
    const auto& rows = map.rows_of[static_cast<size_t>(s)];
    if (rows.empty()) continue;  // zero row for isolated nodes
    double inv = 1.0 / static_cast<double>(rows.size());
    double* out = n.value.row(s);
    for (int ch = 0; ch < c; ++ch) {
      double m1 = 0.0, m2 = 0.0;
      double mx = xv.at(rows[0], ch), mn = mx;
      for (int r : rows) {
        double v = xv.at(r, ch);
        m1 += v;
        m2 += v * v;
        if (v > mx) mx = v;
        if (v < mn) mn = v;
      }
      m1 *= inv;
      m2 *= inv;
      double q = m2 - m1 * m1;
      out[ch] = m1;
      out[c + ch] = std::sqrt((q > 0 ? q : 0.0) + eps);
      out[2 * c + ch] = mx;
      out[3 * c + ch] = mn;
    }
  }
  return push(std::move(n));
}

Tape::Ref Tape::segment_sum(Ref x, const SegmentMap& map) {
  const Tensor& xv = value(x);
  if (xv.rows != map.n_rows) throw ShapeMismatchError("segment_sum: row count mismatch");
  Node n;
  n.op = Op::SegmentSum;
  n.args = {x};
  n.segments = &map;
  n.value = Tensor::zeros(map.n_segments, xv.cols);
  for (int s = 0; s < map.n_segments; ++s)
    for (int r : map.rows_of[static_cast<size_t>(s)]) {
      double* out = n.value.row(s);
      const double* in = xv.row(r);
      for (int ch = 0; ch < xv.cols; ++ch) out[ch] += in[ch];
    }
  return push(std::move(n));
}

Tape::Ref Tape::segment_mean(Ref x, const SegmentMap& map) {
  const Tensor& xv = value(x);
  if (xv.rows != map.n_rows) throw ShapeMismatchError("segment_mean: row count mismatch");
  Node n;
  n.op = Op::SegmentMean;
  n.args = {x};
  n.segments = &map;
  n.value = Tensor::zeros(map.n_segments, xv.cols);
  for (int s = 0; s < map.n_segments; ++s) {
    const auto& rows = map.rows_of[static_cast<size_t>(s)];
    if (rows.empty()) continue;
    double inv = 1.0 / static_cast<double>(rows.size());
    double* out = n.value.row(s);
    for (int r : rows) {
      const double* in = xv.row(r);
      for (int ch = 0; ch < xv.cols; ++ch) out[ch] += in[ch];
    }
    for (int ch = 0; ch < xv.cols; ++ch) out[ch] *= inv;
  }
  return push(std::move(n));
}

Tape::Ref Tape::batchnorm_train(Ref x, Ref gamma, Ref beta, double eps) {
  const Tensor& xv = value(x);
  const Tensor& gv = value(gamma);
  const Tensor& bv = value(beta);
  if (gv.rows != 1 || gv.cols != xv.cols || bv.rows != 1 || bv.cols != xv.cols)
    throw ShapeMismatchError("batchnorm: gamma/beta must be 1 x width");
  if (xv.rows < 1) throw ShapeMismatchError("batchnorm: empty batch");
  int c = xv.cols;
  Node n;
  n.op = Op::BnTrain;
  n.args = {x, gamma, beta};
  n.eps = eps;
  n.aux_b = Tensor::zeros(1, c);  // batch mean
  n.aux_c = Tensor::zeros(1, c);  // batch variance (biased)
  double inv_rows = 1.0 / xv.rows;
  for (int ch = 0; ch < c; ++ch) {
    double m = 0.0;
    for (int r = 0; r < xv.rows; ++r) m += xv.at(r, ch);
    m *= inv_rows;
    double var = 0.0;
    for (int r = 0; r < xv.rows; ++r) {
      double d = xv.at(r, ch) - m;
      var += d * d;
    }
    n.aux_b.v[static_cast<size_t>(ch)] = m;
    n.aux_c.v[static_cast<size_t>(ch)] = var * inv_rows;
  }
  n.aux_a = Tensor::zeros(xv.rows, c);  // normalized input
  n.value = Tensor::zeros(xv.rows, c);
  for (int ch = 0; ch < c; ++ch) {
    double inv_std = 1.0 / std::sqrt(n.aux_c.v[static_cast<size_t>(ch)] + eps);
    double m = n.aux_b.v[static_cast<size_t>(ch)];
    double g = gv.v[static_cast<size_t>(ch)];
    double b = bv.v[static_cast<size_t>(ch)];
    for (int r = 0; r < xv.rows; ++r) {
      double xhat = (xv.at(r, ch) - m) * inv_std;
      n.aux_a.at(r, ch) = xhat;
      n.value.at(r, ch) = g * xhat + b;
    }
  }
  return push(std::move(n));
}

std::pair<const Tensor*, const Tensor*> Tape::bn_batch_stats(Ref bn_ref) const {
  const Node& n = nodes_.at(static_cast<size_t>(bn_ref));
  if (n.op != Op::BnTrain) throw Error("bn_batch_stats: not a training batchnorm node");
  return {&n.aux_b, &n.aux_c};
}

Tape::Ref Tape::batchnorm_eval(Ref x, Ref gamma, Ref beta, const Tensor& running_mean,
                               const Tensor& running_var, double eps) {
  const Tensor& xv = value(x);
  const Tensor& gv = value(gamma);
  const Tensor& bv = value(beta);
  int c = xv.cols;
  if (gv.rows != 1 || gv.cols != c || bv.rows != 1 || bv.cols != c)
    throw ShapeMismatchError("batchnorm: gamma/beta must be 1 x width");
  if (running_mean.rows != 1 || running_mean.cols != c || running_var.rows != 1 ||
      running_var.cols != c)
    throw ShapeMismatchError("batchnorm: running stats must be 1 x width");
  Node n;
  n.op = Op::BnEval;
  n.args = {x, gamma, beta};
  n.eps = eps;
  n.aux_a = Tensor::zeros(xv.rows, c);  // normalized input
  n.aux_b = Tensor::zeros(1, c);        // 1 / sqrt(running_var + eps)
  n.value = Tensor::zeros(xv.rows, c);
  for (int ch = 0; ch < c; ++ch) {
    double inv_std = 1.0 / std::sqrt(running_var.v[static_cast<size_t>(ch)] + eps);
    double m = running_mean.v[static_cast<size_t>(ch)];
    double g = gv.v[static_cast<size_t>(ch)];
    double b = bv.v[static_cast<size_t>(ch)];
    n.aux_b.v[static_cast<size_t>(ch)] = inv_std;
    for (int r = 0; r < xv.rows; ++r) {
      double xhat = (xv.at(r, ch) - m) * inv_std;
      n.aux_a.at(r, ch) = xhat;
      n.value.at(r, ch) = g * xhat + b;
    }
  }
  return push(std::move(n));
}

Tape::Ref Tape::mae_loss(Ref pred, const Tensor& target) {
  const Tensor& pv = value(pred);
  if (pv.cols != 1 || !pv.same_shape(target))
    throw ShapeMismatchError("mae_loss: prediction and target must both be n x 1");
  if (pv.rows < 1) throw ShapeMismatchError("mae_loss: empty batch");
  Node n;
  n.op = Op::MaeLoss;
  n.args = {pred};
  n.aux_a = target;
  double sum = 0.0;
  for (int r = 0; r < pv.rows; ++r) sum += std::abs(pv.at(r, 0) - target.at(r, 0));
  n.value = Tensor::full(1, 1, sum / pv.rows);
  return push(std::move(n));
}

void Tape::backward(Ref loss) {
  const Tensor& lv = value(loss);
  if (lv.rows != 1 || lv.cols != 1) throw ShapeMismatchError("backward: loss must be scalar");
  if (ran_backward_) throw Error("backward: tape already differentiated");
  ran_backward_ = true;
  grad_of(loss).v[0] = 1.0;

  for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
    Node& n = nodes_[static_cast<size_t>(id)];
    if (n.grad.empty()) continue;  // nothing downstream pulled on this node
    const Tensor& g = n.grad;

    switch (n.op) {
      case Op::Leaf:
        break;

      case Op::Affine: {
        const Tensor& xv = value(n.args[0]);
        const Tensor& wv = value(n.args[1]);
        add_matmul_a_bt(grad_of(n.args[0]), g, wv);
        add_matmul_at_b(grad_of(n.args[1]), xv, g);
        Tensor& db = grad_of(n.args[2]);
        for (int r = 0; r < g.rows; ++r) {
          const double* row = g.row(r);
          for (int c = 0; c < g.cols; ++c) db.v[static_cast<size_t>(c)] += row[c];
        }
        break;
      }

      case Op::Relu: {
        Tensor& dx = grad_of(n.args[0]);
        for (size_t i = 0; i < g.v.size(); ++i)
          if (n.value.v[i] > 0) dx.v[i] += g.v[i];
        break;
      }

      case Op::Add: {
        Tensor& dx = grad_of(n.args[0]);
        Tensor& dy = grad_of(n.args[1]);
        for (size_t i = 0; i < g.v.size(); ++i) {
          dx.v[i] += g.v[i];
          dy.v[i] += g.v[i];
        }
        break;
      }

      case Op::AddRowBroadcast: {
        Tensor& dx = grad_of(n.args[0]);
        Tensor& db = grad_of(n.args[1]);
        for (int r = 0; r < g.rows; ++r) {
          const double* row = g.row(r);
          double* dxr = dx.row(r);
          for (int c = 0; c < g.cols; ++c) {
            dxr[c] += row[c];
            db.v[static_cast<size_t>(c)] += row[c];
          }
        }
        break;
      }

      case Op::ConcatCols: {
        int offset = 0;
        for (int arg : n.args) {
          Tensor& da = grad_of(arg);
          for (int r = 0; r < g.rows; ++r) {
            const double* row = g.row(r) + offset;
            double* dar = da.row(r);
            for (int c = 0; c < da.cols; ++c) dar[c] += row[c];
          }
          offset += da.cols;
        }
        break;
      }

      case Op::SliceCols: {
        Tensor& dx = grad_of(n.args[0]);
        for (int r = 0; r < g.rows; ++r) {
          const double* row = g.row(r);
          double* dxr = dx.row(r) + n.begin;
          for (int c = 0; c < g.cols; ++c) dxr[c] += row[c];
        }
        break;
      }

      case Op::GatherRows: {
        Tensor& dx = grad_of(n.args[0]);
        for (int r = 0; r < g.rows; ++r) {
          const double* row = g.row(r);
          double* dxr = dx.row(n.index[static_cast<size_t>(r)]);
          for (int c = 0; c < g.cols; ++c) dxr[c] += row[c];
        }
        break;
      }

      case Op::ScaleRows: {
        Tensor& dx = grad_of(n.args[0]);
        for (int r = 0; r < g.rows; ++r) {
          double s = n.scale[static_cast<size_t>(r)];
          const double* row = g.row(r);
          double* dxr = dx.row(r);
          for (int c = 0; c < g.cols; ++c) dxr[c] += s * row[c];
        }
        break;
      }

      case Op::SegmentStats: {
        const Tensor& xv = value(n.args[0]);
        Tensor& dx = grad_of(n.args[0]);
        int c = xv.cols;
        for (int s = 0; s < n.segments->n_segments; ++s) {
          const auto& rows = n.segments->rows_of[static_cast<size_t>(s)];
          if (rows.empty()) continue;
          double inv = 1.0 / static_cast<double>(rows.size());
          const double* gs = g.row(s);
          const double* vs = n.value.row(s);
          for (int ch = 0; ch < c; ++ch) {
            double g_mean = gs[ch];
            double g_std = gs[c + ch];
            double g_max = gs[2 * c + ch];
            double g_min = gs[3 * c + ch];

            // Recompute the per-segment moments and extrema locations; this
            // trades a second scan for not storing them on the tape.
            double m1 = 0.0, m2 = 0.0;
            int arg_max = rows[0], arg_min = rows[0];
            double mx = xv.at(rows[0], ch), mn = mx;
            for (int r : rows) {
              double v = xv.at(r, ch);
              m1 += v;
              m2 += v * v;
              if (v > mx) {
                mx = v;
                arg_max = r;
              }
              if (v < mn) {
                mn = v;
                arg_min = r;
              }
            }
            m1 *= inv;
            m2 *= inv;
            double q = m2 - m1 * m1;
            double sigma = vs[c + ch];  // already sqrt(relu(q) + eps)

            if (g_mean != 0.0) {
              double per_row = g_mean * inv;
              for (int r : rows) dx.at(r, ch) += per_row;
            }
            if (g_std != 0.0 && q > 0.0) {
              // d sigma / d z_r = (z_r - m1) / (sigma * n); the relu gate
              // kills the branch when the variance is non-positive.
              double coef = g_std * inv / sigma;
              for (int r : rows) dx.at(r, ch) += coef * (xv.at(r, ch) - m1);
            }
            if (g_max != 0.0) dx.at(arg_max, ch) += g_max;
            if (g_min != 0.0) dx.at(arg_min, ch) += g_min;
          }
        }
        break;
      }

      case Op::SegmentSum: {
        Tensor& dx = grad_of(n.args[0]);
        for (int s = 0; s < n.segments->n_segments; ++s) {
          const double* gs = g.row(s);
          for (int r : n.segments->rows_of[static_cast<size_t>(s)]) {
            double* dxr = dx.row(r);
            for (int ch = 0; ch < g.cols; ++ch) dxr[ch] += gs[ch];
          }
        }
        break;
      }

      case Op::SegmentMean: {
        Tensor& dx = grad_of(n.args[0]);
        for (int s = 0; s < n.segments->n_segments; ++s) {
          const auto& rows = n.segments->rows_of[static_cast<size_t>(s)];
          if (rows.empty()) continue;
          double inv = 1.0 / static_cast<double>(rows.size());
          const double* gs = g.row(s);
          for (int r : rows) {
            double* dxr = dx.row(r);
            for (int ch = 0; ch < g.cols; ++ch) dxr[ch] += gs[ch] * inv;
          }
        }
        break;
      }

      case Op::BnTrain: {
        const Tensor& gv = value(n.args[1]);
        Tensor& dx = grad_of(n.args[0]);
        Tensor& dgamma = grad_of(n.args[1]);
        Tensor& dbeta = grad_of(n.args[2]);
        int rows = g.rows, c = g.cols;
        double inv_rows = 1.0 / rows;
        for (int ch = 0; ch < c; ++ch) {
          double sum_g = 0.0, sum_gx = 0.0;
          for (int r = 0; r < rows; ++r) {
            double gr = g.at(r, ch);
            sum_g += gr;
            sum_gx += gr * n.aux_a.at(r, ch);
          }
          dgamma.v[static_cast<size_t>(ch)] += sum_gx;
          dbeta.v[static_cast<size_t>(ch)] += sum_g;
          double inv_std = 1.0 / std::sqrt(n.aux_c.v[static_cast<size_t>(ch)] + n.eps);
          double k = gv.v[static_cast<size_t>(ch)] * inv_std;
          double mean_g = sum_g * inv_rows;
          double mean_gx = sum_gx * inv_rows;
          for (int r = 0; r < rows; ++r)
            dx.at(r, ch) += k * (g.at(r, ch) - mean_g - n.aux_a.at(r, ch) * mean_gx);
        }
        break;
      }

      case Op::BnEval: {
        const Tensor& gv = value(n.args[1]);
        Tensor& dx = grad_of(n.args[0]);
        Tensor& dgamma = grad_of(n.args[1]);
        Tensor& dbeta = grad_of(n.args[2]);
        for (int ch = 0; ch < g.cols; ++ch) {
          double k = gv.v[static_cast<size_t>(ch)] * n.aux_b.v[static_cast<size_t>(ch)];
          double sum_g = 0.0, sum_gx = 0.0;
          for (int r = 0; r < g.rows; ++r) {
            double gr = g.at(r, ch);
            sum_g += gr;
            sum_gx += gr * n.aux_a.at(r, ch);
            dx.at(r, ch) += k * gr;
          }
          dgamma.v[static_cast<size_t>(ch)] += sum_gx;
          dbeta.v[static_cast<size_t>(ch)] += sum_g;
        }
        break;
      }

      case Op::MaeLoss: {
        const Tensor& pv = value(n.args[0]);
        Tensor& dp = grad_of(n.args[0]);
        double scale = g.v[0] / pv.rows;
        for (int r = 0; r < pv.rows; ++r) {
          double d = pv.at(r, 0) - n.aux_a.at(r, 0);
          if (d > 0)
            dp.at(r, 0) += scale;
          else if (d < 0)
            dp.at(r, 0) -= scale;
        }
        break;
      }
    }
  }
}

}  // namespace relgraph
