#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "relgraph/pna.hpp"

namespace relgraph {

struct TrainConfig {
  int epochs = 500;
  int batch_size = 32;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  uint64_t seed = 0;
  // Optional progress hook, called once per finished epoch.
  std::function<void(int epoch, double train_mae, double val_mae)> on_epoch;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_mae = 0.0;
  double val_mae = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> history;
  int best_epoch = 0;        // epoch whose weights the model ends up with
  double best_val_mae = 0.0;
};

// Adam-trained MAE regression of label[label_component]. Shuffles the
// training set each epoch with a seed-derived stream, evaluates the
// validation set after every epoch in eval mode, and finally restores the
// parameters of the lowest-validation-MAE epoch (the earliest one on ties).
TrainReport train_model(PnaModel& model, const std::vector<PathSubgraph>& train_set,
                        const std::vector<PathSubgraph>& val_set, int label_component,
                        const TrainConfig& config);

// Eval-mode MAE of the model on a labeled set.
double evaluate_mae(PnaModel& model, const std::vector<PathSubgraph>& samples,
                    int label_component);

// Label component values of a sample set (the regression targets).
std::vector<double> label_values(const std::vector<PathSubgraph>& samples, int label_component);

}  // namespace relgraph
