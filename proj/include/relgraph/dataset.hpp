#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relgraph/circuit_graph.hpp"

namespace relgraph {

// A labeled sample is a path subgraph carrying its label and origin fields.
using LabeledSample = PathSubgraph;

struct SplitResult {
  std::vector<LabeledSample> train, val, test;
};

// 81 : 10 : 9 split of one pool, used when a design predicts its own paths.
// Samples are first brought into canonical (design, path_index) order, then
// shuffled with the seed; cuts fall at floor(0.81 n) and floor(0.91 n).
// Needs at least 10 samples so every part is non-empty.
SplitResult split_self_referencing(std::vector<LabeledSample> samples, uint64_t seed);

// 90 : 10 train/validation split of one design; the second design's samples
// become the untouched test set.
SplitResult split_single_design(std::vector<LabeledSample> train_design,
                                std::vector<LabeledSample> test_design, uint64_t seed);

// Hold out one named design as the test set; pool every other design and
// split the pool 90 : 10. Throws UnknownDesignError if nothing carries the
// held-out name.
SplitResult split_design_dataset(std::vector<LabeledSample> samples,
                                 const std::string& held_out_design, uint64_t seed);

// JSONL persistence: one sample object per line, nodes/edges in original
// graph ids, label as null, a number, or [mu, sigma, max].
std::string sample_to_json(const LabeledSample& sample);
LabeledSample sample_from_json(const std::string& line, int line_number);
void save_samples(const std::vector<LabeledSample>& samples, const std::string& path);
std::vector<LabeledSample> load_samples(const std::string& path);

}  // namespace relgraph
