#include "relgraph/pna.hpp"

#include <algorithm>
#include <cmath>

#include "relgraph/rng.hpp"

namespace relgraph {

// ---------------------------------------------------------------------------
// Value-level building blocks

std::vector<double> aggregate_stats(const std::vector<std::vector<double>>& messages,
                                    size_t width, double eps) {
  for (const auto& m : messages)
    if (m.size() != width) throw LengthMismatchError("aggregate_stats: ragged message widths");
  std::vector<double> out(4 * width, 0.0);
  if (messages.empty()) return out;
  double inv = 1.0 / static_cast<double>(messages.size());
  for (size_t ch = 0; ch < width; ++ch) {
    double m1 = 0.0, m2 = 0.0;
    double mx = messages[0][ch], mn = mx;
    for (const auto& m : messages) {
      double v = m[ch];
      m1 += v;
      m2 += v * v;
      if (v > mx) mx = v;
      if (v < mn) mn = v;
    }
    m1 *= inv;
    m2 *= inv;
    double q = m2 - m1 * m1;
    out[ch] = m1;
    out[width + ch] = std::sqrt((q > 0 ? q : 0.0) + eps);
    out[2 * width + ch] = mx;
    out[3 * width + ch] = mn;
  }
  return out;
}

std::array<double, 3> degree_scalers(int degree, double delta) {
  if (degree < 0) throw Error("degree_scalers: negative degree");
  if (!(delta > 0)) throw Error("degree_scalers: delta must be positive");
  if (degree == 0) return {1.0, 1.0, 1.0};
  double s = std::log(static_cast<double>(degree) + 1.0) / delta;
  return {1.0, s, 1.0 / s};
}

double compute_delta(const std::vector<PathSubgraph>& training_subgraphs) {
  double sum = 0.0;
  int64_t count = 0;
  bool any_positive = false;
  for (const auto& sg : training_subgraphs) {
    std::vector<int> indeg(sg.nodes.size(), 0);
    for (const auto& [u, v] : sg.local_edges()) ++indeg[static_cast<size_t>(v)];
    for (size_t i = 0; i < indeg.size(); ++i) {
      sum += std::log(static_cast<double>(indeg[i]) + 1.0);
      ++count;
      if (indeg[i] > 0) any_positive = true;
    }
  }
  if (count == 0 || !any_positive)
    throw NoPositiveDegreeError("cannot normalize degree scalers: no incoming edges");
  return sum / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Configuration, parameters, initialization

void ModelConfig::check() const {
  if (feature_width < 1) throw Error("model: feature width must be positive");
  if (channels < 1 || towers < 1 || layers < 1)
    throw Error("model: channels, towers, and layers must be positive");
  if (channels % towers != 0) throw Error("model: towers must divide channels evenly");
  if (head_hidden1 < 1 || head_hidden2 < 1) throw Error("model: head widths must be positive");
  if (!(agg_eps > 0) || !(bn_eps > 0)) throw Error("model: eps values must be positive");
  if (bn_momentum <= 0 || bn_momentum >= 1) throw Error("model: momentum must lie in (0, 1)");
}

namespace {

AffineParams init_affine(int fan_in, int fan_out, SplitMix64& rng) {
  double bound = std::sqrt(1.0 / fan_in);
  AffineParams p;
  p.w = Tensor::zeros(fan_in, fan_out);
  for (double& d : p.w.v) d = rng.next_uniform(-bound, bound);
  p.b = Tensor::zeros(1, fan_out);
  for (double& d : p.b.v) d = rng.next_uniform(-bound, bound);
  return p;
}

}  // namespace

PnaModel PnaModel::init(const ModelConfig& config, double delta, uint64_t seed) {
  config.check();
  if (!(delta > 0)) throw Error("model: delta must be positive");
  PnaModel m;
  m.config = config;
  m.delta = delta;

  SplitMix64 rng(derive_seed(seed, 0x6d6f64656cULL));
  int f = config.channels;
  int fc = config.tower_width();

  m.embed = init_affine(config.input_width(), f, rng);
  for (int l = 0; l < config.layers; ++l) {
    PnaLayerParams layer;
    for (int t = 0; t < config.towers; ++t)
      layer.message.push_back(init_affine(2 * fc, fc, rng));
    for (int t = 0; t < config.towers; ++t)
      layer.update.push_back(init_affine(fc + 12 * fc, fc, rng));
    layer.mixing = init_affine(f, f, rng);
    m.layers.push_back(std::move(layer));

    BatchNormParams bn;
    bn.gamma = Tensor::full(1, f, 1.0);
    bn.beta = Tensor::zeros(1, f);
    bn.running_mean = Tensor::zeros(1, f);
    bn.running_var = Tensor::full(1, f, 1.0);
    m.norms.push_back(std::move(bn));
  }
  m.head1 = init_affine(f, config.head_hidden1, rng);
  m.head2 = init_affine(config.head_hidden1, config.head_hidden2, rng);
  m.head3 = init_affine(config.head_hidden2, 1, rng);
  return m;
}

void PnaModel::for_each_param(const std::function<void(const std::string&, Tensor&)>& fn) {
  fn("embed.w", embed.w);
  fn("embed.b", embed.b);
  for (size_t l = 0; l < layers.size(); ++l) {
    std::string base = "layer" + std::to_string(l) + ".";
    for (size_t t = 0; t < layers[l].message.size(); ++t) {
      fn(base + "tower" + std::to_string(t) + ".message.w", layers[l].message[t].w);
      fn(base + "tower" + std::to_string(t) + ".message.b", layers[l].message[t].b);
    }
    for (size_t t = 0; t < layers[l].update.size(); ++t) {
      fn(base + "tower" + std::to_string(t) + ".update.w", layers[l].update[t].w);
      fn(base + "tower" + std::to_string(t) + ".update.b", layers[l].update[t].b);
    }
    fn(base + "mixing.w", layers[l].mixing.w);
    fn(base + "mixing.b", layers[l].mixing.b);
    fn("norm" + std::to_string(l) + ".gamma", norms[l].gamma);
    fn("norm" + std::to_string(l) + ".beta", norms[l].beta);
  }
  fn("head1.w", head1.w);
  fn("head1.b", head1.b);
  fn("head2.w", head2.w);
  fn("head2.b", head2.b);
  fn("head3.w", head3.w);
  fn("head3.b", head3.b);
}

void PnaModel::for_each_state(const std::function<void(const std::string&, Tensor&)>& fn) {
  for_each_param(fn);
  for (size_t l = 0; l < norms.size(); ++l) {
    fn("norm" + std::to_string(l) + ".running_mean", norms[l].running_mean);
    fn("norm" + std::to_string(l) + ".running_var", norms[l].running_var);
  }
}

int64_t PnaModel::parameter_count() {
  int64_t n = 0;
  for_each_param([&](const std::string&, Tensor& t) { n += static_cast<int64_t>(t.size()); });
  return n;
}

// ---------------------------------------------------------------------------
// Batch assembly

BatchGraph BatchGraph::assemble(const std::vector<const PathSubgraph*>& subgraphs,
                                const ModelConfig& config, int label_component) {
  if (subgraphs.empty()) throw EmptyDatasetError("cannot assemble an empty batch");
  BatchGraph b;
  b.n_graphs = static_cast<int>(subgraphs.size());

  int total_nodes = 0;
  size_t total_edges = 0;
  for (const PathSubgraph* sg : subgraphs) {
    total_nodes += sg->node_count();
    total_edges += sg->edges.size();
  }
  b.n_nodes = total_nodes;
  b.x = Tensor::zeros(total_nodes, config.input_width());
  b.edge_src.reserve(total_edges);
  b.edge_dst.reserve(total_edges);
  b.in_degree.assign(static_cast<size_t>(total_nodes), 0);

  std::vector<int> graph_of(static_cast<size_t>(total_nodes));
  int base = 0;
  for (int gi = 0; gi < b.n_graphs; ++gi) {
    const PathSubgraph& sg = *subgraphs[static_cast<size_t>(gi)];
    if (sg.node_count() == 0) throw EmptyDatasetError("subgraph without nodes in batch");
    for (int i = 0; i < sg.node_count(); ++i) {
      int fi = sg.feature_index[static_cast<size_t>(i)];
      if (fi < 0 || fi >= config.feature_width)
        throw Error("feature index " + std::to_string(fi) +
                    " outside the configured feature width");
      b.x.at(base + i, fi) = 1.0;
      if (config.use_target_mask && sg.target[static_cast<size_t>(i)])
        b.x.at(base + i, config.feature_width) = 1.0;
      graph_of[static_cast<size_t>(base + i)] = gi;
    }
    for (const auto& [u, v] : sg.local_edges()) {
      if (u < 0 || v < 0) throw Error("subgraph edge references a node outside the subgraph");
      b.edge_src.push_back(base + u);
      b.edge_dst.push_back(base + v);
      ++b.in_degree[static_cast<size_t>(base + v)];
    }
    if (label_component >= 0) {
      if (static_cast<int>(sg.label.size()) <= label_component)
        throw Error("sample lacks label component " + std::to_string(label_component));
      b.label.push_back(sg.label[static_cast<size_t>(label_component)]);
    }
    base += sg.node_count();
  }
  b.incoming = SegmentMap::from_assignments(b.edge_dst, total_nodes);
  b.by_graph = SegmentMap::from_assignments(graph_of, b.n_graphs);
  return b;
}

// ---------------------------------------------------------------------------
// Forward pass

namespace {

struct LayerRefs {
  std::vector<Tape::Ref> mw, mb, uw, ub;
  Tape::Ref mixw = -1, mixb = -1;
};

// One message-passing layer: per tower, messages on every edge from the
// concatenated (destination, source) embeddings, four statistics per
// destination, three degree scalings, then the tower update on the node's
// own embedding joined with the scaled aggregate. Towers are concatenated
// and mixed with a final affine.
Tape::Ref build_pna_layer(Tape& tape, Tape::Ref h, const std::vector<int>& edge_src,
                          const std::vector<int>& edge_dst, const SegmentMap& incoming,
                          const std::vector<double>& s_amp, const std::vector<double>& s_att,
                          const LayerRefs& refs, const ModelConfig& config, double agg_eps) {
  int fc = config.tower_width();
  std::vector<Tape::Ref> tower_out;
  for (int t = 0; t < config.towers; ++t) {
    Tape::Ref hk = tape.slice_cols(h, t * fc, (t + 1) * fc);
    Tape::Ref dst = tape.gather_rows(hk, edge_dst);
    Tape::Ref src = tape.gather_rows(hk, edge_src);
    Tape::Ref msg_in = tape.concat_cols({dst, src});
    Tape::Ref msg = tape.affine(msg_in, refs.mw[static_cast<size_t>(t)],
                                refs.mb[static_cast<size_t>(t)]);
    Tape::Ref agg = tape.segment_stats(msg, incoming, agg_eps);
    Tape::Ref scaled = tape.concat_cols(
        {agg, tape.scale_rows(agg, s_amp), tape.scale_rows(agg, s_att)});
    Tape::Ref upd_in = tape.concat_cols({hk, scaled});
    tower_out.push_back(tape.affine(upd_in, refs.uw[static_cast<size_t>(t)],
                                    refs.ub[static_cast<size_t>(t)]));
  }
  Tape::Ref cat = tape.concat_cols(tower_out);
  return tape.affine(cat, refs.mixw, refs.mixb);
}

}  // namespace

Forward model_forward(PnaModel& model, const BatchGraph& batch, Mode mode) {
  const ModelConfig& cfg = model.config;
  cfg.check();

  Forward fwd;
  Tape& tape = fwd.tape;

  // Parameters enter the tape in for_each_param order so gradient readout
  // and the optimizer can stay index-aligned.
  std::vector<Tape::Ref> flat;
  model.for_each_param(
      [&](const std::string&, Tensor& t) { flat.push_back(tape.leaf(t)); });
  fwd.param_refs = flat;

  size_t cursor = 0;
  auto next_ref = [&]() { return flat[cursor++]; };
  Tape::Ref embed_w = next_ref();
  Tape::Ref embed_b = next_ref();
  std::vector<LayerRefs> layer_refs(static_cast<size_t>(cfg.layers));
  std::vector<std::pair<Tape::Ref, Tape::Ref>> norm_refs;
  for (int l = 0; l < cfg.layers; ++l) {
    LayerRefs& r = layer_refs[static_cast<size_t>(l)];
    for (int t = 0; t < cfg.towers; ++t) {
      r.mw.push_back(next_ref());
      r.mb.push_back(next_ref());
    }
    for (int t = 0; t < cfg.towers; ++t) {
      r.uw.push_back(next_ref());
      r.ub.push_back(next_ref());
    }
    r.mixw = next_ref();
    r.mixb = next_ref();
    Tape::Ref gamma = next_ref();
    Tape::Ref beta = next_ref();
    norm_refs.emplace_back(gamma, beta);
  }
  Tape::Ref h1w = next_ref(), h1b = next_ref();
  Tape::Ref h2w = next_ref(), h2b = next_ref();
  Tape::Ref h3w = next_ref(), h3b = next_ref();

  // Degree scalers are constants of the batch.
  std::vector<double> s_amp(static_cast<size_t>(batch.n_nodes));
  std::vector<double> s_att(static_cast<size_t>(batch.n_nodes));
  for (int v = 0; v < batch.n_nodes; ++v) {
    auto s = degree_scalers(batch.in_degree[static_cast<size_t>(v)], model.delta);
    s_amp[static_cast<size_t>(v)] = s[1];
    s_att[static_cast<size_t>(v)] = s[2];
  }

  Tape::Ref h = tape.affine(tape.leaf(batch.x), embed_w, embed_b);
  for (int l = 0; l < cfg.layers; ++l) {
    h = build_pna_layer(tape, h, batch.edge_src, batch.edge_dst, batch.incoming, s_amp, s_att,
                        layer_refs[static_cast<size_t>(l)], cfg, cfg.agg_eps);
    auto [gamma, beta] = norm_refs[static_cast<size_t>(l)];
    if (mode == Mode::Train) {
      h = tape.batchnorm_train(h, gamma, beta, cfg.bn_eps);
      fwd.bn_refs.push_back(h);
    } else {
      BatchNormParams& bn = model.norms[static_cast<size_t>(l)];
      h = tape.batchnorm_eval(h, gamma, beta, bn.running_mean, bn.running_var, cfg.bn_eps);
    }
    h = tape.relu(h);
  }

  Tape::Ref pooled =
      cfg.mean_readout ? tape.segment_mean(h, batch.by_graph) : tape.segment_sum(h, batch.by_graph);
  Tape::Ref z = tape.relu(tape.affine(pooled, h1w, h1b));
  z = tape.relu(tape.affine(z, h2w, h2b));
  fwd.prediction = tape.affine(z, h3w, h3b);
  return fwd;
}

std::vector<double> model_predict(PnaModel& model, const std::vector<PathSubgraph>& subgraphs) {
  std::vector<double> out;
  out.reserve(subgraphs.size());
  // Chunked to bound peak memory; eval-mode outputs are independent of how
  // the batch is composed, so chunking cannot change any value.
  const size_t chunk = 256;
  for (size_t begin = 0; begin < subgraphs.size(); begin += chunk) {
    size_t end = std::min(subgraphs.size(), begin + chunk);
    std::vector<const PathSubgraph*> ptrs;
    ptrs.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) ptrs.push_back(&subgraphs[i]);
    BatchGraph batch = BatchGraph::assemble(ptrs, model.config, -1);
    Forward fwd = model_forward(model, batch, Mode::Eval);
    const Tensor& pred = fwd.tape.value(fwd.prediction);
    for (int r = 0; r < pred.rows; ++r) out.push_back(pred.at(r, 0));
  }
  return out;
}

Tensor pna_layer_forward(const Tensor& z, const std::vector<std::pair<int, int>>& edges,
                         const PnaLayerParams& params, const ModelConfig& config, double delta) {
  config.check();
  if (z.cols != config.channels) throw ShapeMismatchError("pna_layer_forward: width mismatch");
  std::vector<int> edge_src, edge_dst;
  std::vector<int> indeg(static_cast<size_t>(z.rows), 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= z.rows || v < 0 || v >= z.rows)
      throw Error("pna_layer_forward: edge endpoint out of range");
    edge_src.push_back(u);
    edge_dst.push_back(v);
    ++indeg[static_cast<size_t>(v)];
  }
  SegmentMap incoming = SegmentMap::from_assignments(edge_dst, z.rows);
  std::vector<double> s_amp(static_cast<size_t>(z.rows)), s_att(static_cast<size_t>(z.rows));
  for (int v = 0; v < z.rows; ++v) {
    auto s = degree_scalers(indeg[static_cast<size_t>(v)], delta);
    s_amp[static_cast<size_t>(v)] = s[1];
    s_att[static_cast<size_t>(v)] = s[2];
  }

  Tape tape;
  LayerRefs refs;
  for (int t = 0; t < config.towers; ++t) {
    refs.mw.push_back(tape.leaf(params.message[static_cast<size_t>(t)].w));
    refs.mb.push_back(tape.leaf(params.message[static_cast<size_t>(t)].b));
  }
  for (int t = 0; t < config.towers; ++t) {
    refs.uw.push_back(tape.leaf(params.update[static_cast<size_t>(t)].w));
    refs.ub.push_back(tape.leaf(params.update[static_cast<size_t>(t)].b));
  }
  refs.mixw = tape.leaf(params.mixing.w);
  refs.mixb = tape.leaf(params.mixing.b);
  Tape::Ref out = build_pna_layer(tape, tape.leaf(z), edge_src, edge_dst, incoming, s_amp,
                                  s_att, refs, config, config.agg_eps);
  return tape.value(out);
}

}  // namespace relgraph
