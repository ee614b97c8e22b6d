#include "relgraph/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relgraph/metrics.hpp"
#include "relgraph/rng.hpp"

namespace relgraph {

std::vector<double> label_values(const std::vector<PathSubgraph>& samples,
                                 int label_component) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (label_component < 0 || static_cast<int>(s.label.size()) <= label_component)
      throw Error("sample lacks label component " + std::to_string(label_component));
    double v = s.label[static_cast<size_t>(label_component)];
    if (!std::isfinite(v)) throw Error("sample label is not finite");
    out.push_back(v);
  }
  return out;
}

double evaluate_mae(PnaModel& model, const std::vector<PathSubgraph>& samples,
                    int label_component) {
  return mae(model_predict(model, samples), label_values(samples, label_component));
}

namespace {

struct AdamState {
  std::vector<Tensor> m, v;
  int64_t t = 0;
};

}  // namespace

TrainReport train_model(PnaModel& model, const std::vector<PathSubgraph>& train_set,
                        const std::vector<PathSubgraph>& val_set, int label_component,
                        const TrainConfig& config) {
  if (train_set.empty()) throw EmptyDatasetError("training set is empty");
  if (val_set.empty()) throw EmptyDatasetError("validation set is empty");
  if (config.epochs < 1) throw Error("epoch count must be positive");
  if (config.batch_size < 1) throw Error("batch size must be positive");
  label_values(train_set, label_component);  // validates labels up front
  label_values(val_set, label_component);

  // Optimizer slots, index-aligned with for_each_param.
  AdamState adam;
  model.for_each_param([&](const std::string&, Tensor& p) {
    adam.m.push_back(Tensor::zeros(p.rows, p.cols));
    adam.v.push_back(Tensor::zeros(p.rows, p.cols));
  });

  TrainReport report;
  report.best_val_mae = std::numeric_limits<double>::infinity();
  std::vector<Tensor> best_params;

  std::vector<int> order(train_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    SplitMix64 rng(derive_seed(config.seed, static_cast<uint64_t>(epoch)));
    shuffle(order, rng);

    double abs_err_sum = 0.0;
    for (size_t begin = 0; begin < order.size(); begin += static_cast<size_t>(config.batch_size)) {
      size_t end = std::min(order.size(), begin + static_cast<size_t>(config.batch_size));
      std::vector<const PathSubgraph*> ptrs;
      ptrs.reserve(end - begin);
      for (size_t i = begin; i < end; ++i)
        ptrs.push_back(&train_set[static_cast<size_t>(order[i])]);

      BatchGraph batch = BatchGraph::assemble(ptrs, model.config, label_component);
      Forward fwd = model_forward(model, batch, Mode::Train);

      Tensor target(batch.n_graphs, 1);
      for (int g = 0; g < batch.n_graphs; ++g)
        target.at(g, 0) = batch.label[static_cast<size_t>(g)];
      Tape::Ref loss = fwd.tape.mae_loss(fwd.prediction, target);
      abs_err_sum += fwd.tape.value(loss).v[0] * static_cast<double>(batch.n_graphs);

      // Running batchnorm statistics move before the weights do, mirroring
      // the usual train-step order (the forward pass already happened).
      for (size_t l = 0; l < fwd.bn_refs.size(); ++l) {
        auto [mean, var] = fwd.tape.bn_batch_stats(fwd.bn_refs[l]);
        BatchNormParams& bn = model.norms[l];
        int rows = batch.n_nodes;
        // Running variance uses the unbiased estimate; normalization inside
        // the layer used the biased one.
        double unbias = rows > 1 ? static_cast<double>(rows) / (rows - 1) : 1.0;
        for (int c = 0; c < bn.running_mean.cols; ++c) {
          double m = mean->v[static_cast<size_t>(c)];
          double v = var->v[static_cast<size_t>(c)] * unbias;
          bn.running_mean.v[static_cast<size_t>(c)] =
              (1.0 - model.config.bn_momentum) * bn.running_mean.v[static_cast<size_t>(c)] +
              model.config.bn_momentum * m;
          bn.running_var.v[static_cast<size_t>(c)] =
              (1.0 - model.config.bn_momentum) * bn.running_var.v[static_cast<size_t>(c)] +
              model.config.bn_momentum * v;
        }
      }

      fwd.tape.backward(loss);

      ++adam.t;
      double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(adam.t));
      double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(adam.t));
      size_t slot = 0;
      model.for_each_param([&](const std::string&, Tensor& p) {
        const Tensor& g = fwd.tape.grad(fwd.param_refs[slot]);
        Tensor& m = adam.m[slot];
        Tensor& v = adam.v[slot];
        if (!g.empty()) {
          for (size_t i = 0; i < p.v.size(); ++i) {
            m.v[i] = config.beta1 * m.v[i] + (1.0 - config.beta1) * g.v[i];
            v.v[i] = config.beta2 * v.v[i] + (1.0 - config.beta2) * g.v[i] * g.v[i];
            double mhat = m.v[i] / bc1;
            double vhat = v.v[i] / bc2;
            p.v[i] -= config.lr * mhat / (std::sqrt(vhat) + config.adam_eps);
          }
        } else {
          // A parameter can sit out a batch (e.g. message weights when the
          // batch has no edges); its moments still decay.
          for (size_t i = 0; i < p.v.size(); ++i) {
            m.v[i] = config.beta1 * m.v[i];
            v.v[i] = config.beta2 * v.v[i];
            double mhat = m.v[i] / bc1;
            double vhat = v.v[i] / bc2;
            p.v[i] -= config.lr * mhat / (std::sqrt(vhat) + config.adam_eps);
          }
        }
        ++slot;
      });
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_mae = abs_err_sum / static_cast<double>(train_set.size());
    rec.val_mae = evaluate_mae(model, val_set, label_component);
    report.history.push_back(rec);
    if (config.on_epoch) config.on_epoch(epoch, rec.train_mae, rec.val_mae);

    if (rec.val_mae < report.best_val_mae) {
      report.best_val_mae = rec.val_mae;
      report.best_epoch = epoch;
      best_params.clear();
      model.for_each_state(
          [&](const std::string&, Tensor& p) { best_params.push_back(p); });
    }
  }

  // Leave the model at its best validation epoch, running stats included.
  size_t slot = 0;
  model.for_each_state([&](const std::string&, Tensor& p) { p = best_params[slot++]; });
  return report;
}

}  // namespace relgraph
