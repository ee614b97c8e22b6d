#pragma once

#include <string>

#include "relgraph/pna.hpp"

namespace relgraph {

// Binary model checkpoint: magic, format version, configuration, the degree
// normalizer, and every state tensor (parameters and batchnorm running
// statistics) as little-endian doubles. Loading reproduces the saved model
// bit for bit, so save -> load -> save emits identical bytes.
void save_checkpoint(PnaModel& model, const std::string& path);
PnaModel load_checkpoint(const std::string& path);

}  // namespace relgraph
