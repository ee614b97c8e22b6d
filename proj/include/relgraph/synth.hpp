#pragma once

#include <cstdint>
#include <string>

#include "relgraph/netlist.hpp"

namespace relgraph {

// Knobs for the synthetic benchmark generator.
struct SynthConfig {
  std::string name = "synth";
  int n_gates = 2000;        // total instances, flip-flops included
  double dff_fraction = 0.45;
  int n_inputs = 32;
  int depth = 8;             // combinational layer count
  double clock_period_ns = 0.0;  // <= 0 picks one from the depth
  uint64_t seed = 0;
};

// Generates a valid sequential design over the given catalog (which must
// contain the standard kinds): a layered combinational DAG hanging off the
// primary inputs and flip-flop outputs, flip-flop data pins fed mostly from
// the deep layers, and every otherwise-unused net promoted to a primary
// output. The same seed always yields the same netlist. Different seeds
// shift the cell mix per layer a little, so a family of designs shares one
// recipe without being clones.
Netlist generate_synthetic_netlist(const SynthConfig& config, const CellCatalog& catalog);

}  // namespace relgraph
