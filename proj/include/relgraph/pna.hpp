#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "relgraph/circuit_graph.hpp"
#include "relgraph/tape.hpp"
#include "relgraph/tensor.hpp"

namespace relgraph {

// ---------------------------------------------------------------------------
// Value-level building blocks (also exercised directly by tests)

// Four aggregation statistics over a set of equal-length message vectors,
// concatenated as [mean | std | max | min]. `width` sizes the zero result
// when `messages` is empty. std = sqrt(relu(E[z^2] - E[z]^2) + eps).
std::vector<double> aggregate_stats(const std::vector<std::vector<double>>& messages,
                                    size_t width, double eps);

// Degree scalers {identity, amplification, attenuation} for in-degree d:
// S(d, alpha) = (log(d + 1) / delta)^alpha with alpha in {0, 1, -1}. A node
// with d = 0 gets all ones (its aggregation is zero anyway).
std::array<double, 3> degree_scalers(int degree, double delta);

// Normalizer delta: the mean of log(d + 1) over every node of every
// training subgraph, d being the node's in-degree inside its subgraph.
// Throws NoPositiveDegreeError if no node has an incoming edge.
double compute_delta(const std::vector<PathSubgraph>& training_subgraphs);

// ---------------------------------------------------------------------------
// Model configuration and parameters

struct ModelConfig {
  int feature_width = 13;   // one-hot width of the node features
  bool use_target_mask = true;  // append a path-membership column
  int channels = 75;        // embedding width f
  int towers = 5;           // t; channels must divide evenly
  int layers = 4;
  int head_hidden1 = 50;
  int head_hidden2 = 25;
  double agg_eps = 1e-5;
  double bn_eps = 1e-5;
  double bn_momentum = 0.1;
  bool mean_readout = false;  // default readout is the sum

  int input_width() const { return feature_width + (use_target_mask ? 1 : 0); }
  int tower_width() const { return channels / towers; }
  void check() const;
};

struct AffineParams {
  Tensor w, b;
};

struct BatchNormParams {
  Tensor gamma, beta;          // learned
  Tensor running_mean, running_var;  // tracked, not learned
};

struct PnaLayerParams {
  std::vector<AffineParams> message;  // per tower: (2 fc) -> fc
  std::vector<AffineParams> update;   // per tower: (fc + 12 fc) -> fc
  AffineParams mixing;                // channels -> channels
};

struct PnaModel {
  ModelConfig config;
  double delta = 1.0;  // degree-scaler normalizer, fixed from the training set
  AffineParams embed;  // input_width -> channels
  std::vector<PnaLayerParams> layers;
  std::vector<BatchNormParams> norms;
  AffineParams head1, head2, head3;

  // Uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) weights and biases; batchnorm
  // starts at gamma 1, beta 0, running mean 0, running variance 1.
  static PnaModel init(const ModelConfig& config, double delta, uint64_t seed);

  // Visits every learned parameter in a fixed order with a stable name.
  void for_each_param(const std::function<void(const std::string&, Tensor&)>& fn);
  // Learned parameters plus the batchnorm running statistics.
  void for_each_state(const std::function<void(const std::string&, Tensor&)>& fn);
  int64_t parameter_count();
};

// ---------------------------------------------------------------------------
// Batched forward pass

// Disjoint union of subgraphs prepared for the model: dense one-hot inputs,
// local edges, and node -> graph assignment.
struct BatchGraph {
  int n_nodes = 0;
  int n_graphs = 0;
  Tensor x;                      // (n_nodes, input_width)
  std::vector<int> edge_src, edge_dst;  // local node ids
  SegmentMap incoming;           // edge rows -> destination nodes
  SegmentMap by_graph;           // node rows -> graphs
  std::vector<int> in_degree;    // per node
  std::vector<double> label;     // per graph; empty when unlabeled

  static BatchGraph assemble(const std::vector<const PathSubgraph*>& subgraphs,
                             const ModelConfig& config, int label_component);
};

enum class Mode { Train, Eval };

struct Forward {
  Tape tape;
  Tape::Ref prediction = -1;                  // (n_graphs, 1)
  std::vector<Tape::Ref> param_refs;          // aligned with for_each_param order
  std::vector<Tape::Ref> bn_refs;             // training-mode batchnorm nodes, per layer
};

// Builds the full forward computation on a fresh tape. In Train mode the
// batchnorm nodes normalize by batch statistics (retrievable for running
// updates); in Eval mode they use the stored running statistics.
Forward model_forward(PnaModel& model, const BatchGraph& batch, Mode mode);

// Convenience: eval-mode predictions for a set of subgraphs.
std::vector<double> model_predict(PnaModel& model, const std::vector<PathSubgraph>& subgraphs);

// One PNA layer applied outside any model, for oracle comparisons:
// embeddings z (n, channels) -> (n, channels).
Tensor pna_layer_forward(const Tensor& z, const std::vector<std::pair<int, int>>& edges,
                         const PnaLayerParams& params, const ModelConfig& config, double delta);

}  // namespace relgraph
