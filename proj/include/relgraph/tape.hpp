#pragma once

#include <utility>
#include <vector>

#include "relgraph/tensor.hpp"

namespace relgraph {

// Maps rows of a tensor into segments (edge rows -> destination nodes, or
// node rows -> graphs). Row lists keep the original row order, which fixes
// the tie-breaking of max/min gradients to the first occurrence.
struct SegmentMap {
  int n_rows = 0;
  int n_segments = 0;
  std::vector<std::vector<int>> rows_of;

  static SegmentMap from_assignments(const std::vector<int>& segment_of, int n_segments);
};

// Reverse-mode automatic differentiation over eagerly evaluated tensor ops.
// A Tape is built fresh for every forward pass; backward() walks it once in
// reverse and accumulates gradients. SegmentMap arguments are held by
// pointer and must outlive the tape.
class Tape {
 public:
  using Ref = int;

  Ref leaf(Tensor value);

  // y = x * w + b, with x (n,a), w (a,b), b (1,b).
  Ref affine(Ref x, Ref w, Ref b);
  Ref relu(Ref x);
  Ref add(Ref x, Ref y);
  // y = x + b with b (1,c) broadcast over rows.
  Ref add_row_broadcast(Ref x, Ref b);
  Ref concat_cols(const std::vector<Ref>& parts);
  Ref slice_cols(Ref x, int begin, int end);
  // y.row(r) = x.row(index[r]); indices may repeat.
  Ref gather_rows(Ref x, std::vector<int> index);
  // y.row(r) = x.row(r) * scale[r]; the scale vector is a constant.
  Ref scale_rows(Ref x, std::vector<double> scale);

  // Per-segment statistics over rows of x (n_rows, c) -> (n_segments, 4c)
  // laid out as [mean | std | max | min]. Empty segments yield zero rows.
  // std = sqrt(relu(E[z^2] - E[z]^2) + eps).
  Ref segment_stats(Ref x, const SegmentMap& map, double eps);

  // Per-segment sum / mean of rows: (n_rows, c) -> (n_segments, c).
  Ref segment_sum(Ref x, const SegmentMap& map);
  Ref segment_mean(Ref x, const SegmentMap& map);

  // Batch normalization over rows, training mode: normalizes with the batch
  // mean and biased variance, then applies gamma/beta. Batch statistics are
  // retrievable via bn_batch_stats for running-average updates.
  Ref batchnorm_train(Ref x, Ref gamma, Ref beta, double eps);
  // mean (1,c), biased variance (1,c) of the batch that fed this op.
  std::pair<const Tensor*, const Tensor*> bn_batch_stats(Ref bn_ref) const;

  // Inference mode: normalizes with the provided running statistics.
  Ref batchnorm_eval(Ref x, Ref gamma, Ref beta, const Tensor& running_mean,
                     const Tensor& running_var, double eps);

  // Mean absolute error against a constant target, both (n,1) -> (1,1).
  Ref mae_loss(Ref pred, const Tensor& target);

  const Tensor& value(Ref r) const { return nodes_[static_cast<size_t>(r)].value; }
  // Valid after backward(). A node nothing pulled on reports an empty
  // tensor, which callers treat as all zeros.
  const Tensor& grad(Ref r) const;

  void backward(Ref loss);

 private:
  enum class Op {
    Leaf,
    Affine,
    Relu,
    Add,
    AddRowBroadcast,
    ConcatCols,
    SliceCols,
    GatherRows,
    ScaleRows,
    SegmentStats,
    SegmentSum,
    SegmentMean,
    BnTrain,
    BnEval,
    MaeLoss,
  };

  struct Node {
    Op op = Op::Leaf;
    Tensor value;
    Tensor grad;
    std::vector<int> args;
    std::vector<int> index;       // gather indices
    std::vector<double> scale;    // row scales
    const SegmentMap* segments = nullptr;
    double eps = 0.0;
    int begin = 0, end = 0;       // column slice bounds
    Tensor aux_a, aux_b, aux_c;   // op-specific saved tensors
  };

  Ref push(Node node);
  Tensor& grad_of(int id);

  std::vector<Node> nodes_;
  bool ran_backward_ = false;
  Tensor empty_grad_;
};

}  // namespace relgraph
