#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "relgraph/circuit_graph.hpp"
#include "relgraph/netlist.hpp"

namespace relgraph {

// Per-kind timing parameters, all delays in picoseconds.
//   d0_ps          intrinsic delay
//   k_load_ps      extra delay per fan-out sink
//   clk_to_q_ps    launch delay of sequential kinds (ignored otherwise)
//   sigma_rel      relative sigma of the process-variation multiplier
//   var_shift_rel  relative mean shift of that multiplier; slow corners of
//                  real lots are not centred on nominal, and without a shift
//                  the per-path degradation mean would be pure sampling
//                  noise with nothing to learn
//   aging_rel      relative slowdown at end of life under full stress
struct CellDelayParams {
  double d0_ps = 1.0;
  double k_load_ps = 0.0;
  double clk_to_q_ps = 0.0;
  double sigma_rel = 0.0;
  double var_shift_rel = 0.0;
  double aging_rel = 0.0;
};

// Kind-name-keyed delay table. Kept ordered so serialization is stable.
class DelayLibrary {
 public:
  // The bundled synthetic library covering CellCatalog::standard().
  static DelayLibrary standard();

  static DelayLibrary parse(const std::string& text);
  std::string write() const;

  bool has(const std::string& kind) const { return cells_.count(kind) != 0; }
  const CellDelayParams& at(const std::string& kind) const;
  void set(const std::string& kind, const CellDelayParams& params);
  const std::map<std::string, CellDelayParams>& cells() const { return cells_; }

  // Sanity checks: d0 > 0, k_load >= 0, clk_to_q >= 0, sigma_rel in
  // [0, 0.2], aging_rel in [0, 1].
  void validate() const;

 private:
  std::map<std::string, CellDelayParams> cells_;
};

// Library resolved against a catalog: parameters indexed by kind index, so
// the hot timing loops never touch string maps. Throws UnknownCellError if
// the library is missing a catalog kind.
class ResolvedLibrary {
 public:
  ResolvedLibrary(const DelayLibrary& library, const CellCatalog& catalog);
  const CellDelayParams& by_kind(int kind_index) const {
    return params_[static_cast<size_t>(kind_index)];
  }

 private:
  std::vector<CellDelayParams> params_;
};

// One sampled chip: a delay multiplier per gate instance. Gates absent from
// the map sit at multiplier 1. An empty instance is the baseline.
struct VariationInstance {
  uint64_t seed = 0;
  std::unordered_map<std::string, double> multipliers;

  double multiplier(const std::string& gate_name) const {
    auto it = multipliers.find(gate_name);
    return it == multipliers.end() ? 1.0 : it->second;
  }
};

enum class StressMode { WorstCase, Random };

struct AgingParams {
  StressMode stress_mode = StressMode::WorstCase;
  double global_scale = 1.0;
};

// Loaded gate delay: (d0 + k_load * fanout) * multiplier.
double gate_delay(const CellDelayParams& params, int fanout, double multiplier);

// Output arrival time per node, in ps. PIs arrive at 0; a flip-flop output
// launches at clk_to_q (times its multiplier) regardless of its data input;
// a combinational gate adds its own loaded delay to its latest fan-in; a PO
// mirrors its driver. `instance` may be null for the baseline.
std::vector<double> compute_arrivals(const CircuitGraph& graph, const CellCatalog& catalog,
                                     const ResolvedLibrary& library,
                                     const VariationInstance* instance = nullptr);

// Arrival ranked at a timing end point: a PO's own arrival or the latest
// fan-in arrival at a flip-flop's data pin.
double endpoint_data_arrival(const CircuitGraph& graph, const std::vector<double>& arrival,
                             int node);

struct EndpointSlack {
  int node = -1;
  double arrival_ps = 0.0;
  double slack_ps = 0.0;  // clock period minus arrival
};

// Slack at every eligible end point (flip-flop data pins and POs), ordered
// by ascending node id.
std::vector<EndpointSlack> compute_slacks(const CircuitGraph& graph, const CellCatalog& catalog,
                                          const ResolvedLibrary& library,
                                          double clock_period_ns,
                                          const VariationInstance* instance = nullptr);

// Delay of one specific path under an optional variation instance: the
// launch clk-to-q (if the path starts at a flip-flop) plus each path gate's
// loaded delay. Fan-out counts come from the full graph.
double path_delay(const CircuitGraph& graph, const CellCatalog& catalog,
                  const ResolvedLibrary& library, const TimingPath& path,
                  const VariationInstance* instance = nullptr);

// Draws one chip: every gate gets an independent multiplier from
// Normal(1 + var_shift_rel, sigma_rel) truncated at three sigma. Streams are
// keyed by (seed, gate position), so results are independent of evaluation
// order and thread count.
VariationInstance sample_variation_instance(const Netlist& netlist, const CellCatalog& catalog,
                                            const DelayLibrary& library, uint64_t seed);

// Builds an aged chip: multiplier = 1 + aging_rel * stress * global_scale,
// with stress = 1 under WorstCase and uniform in [0, 1) under Random.
VariationInstance apply_aging(const Netlist& netlist, const CellCatalog& catalog,
                              const DelayLibrary& library, const AgingParams& params,
                              uint64_t seed);

// 100 * (degraded - baseline) / baseline. Throws NonpositiveBaselineError.
double degradation_percent(double baseline_ps, double degraded_ps);

struct DegradationLabel {
  double mu = 0.0;
  double sigma = 0.0;  // sample standard deviation (n - 1 divisor)
  double max = 0.0;
};

// Monte-Carlo process-variation label for each path: per-path degradation
// statistics over `instances` chips drawn from derive_seed(seed, i). All
// paths share the same chips, matching how one die ages as a whole.
std::vector<DegradationLabel> label_paths_process_variation(
    const CircuitGraph& graph, const CellCatalog& catalog, const Netlist& netlist,
    const DelayLibrary& library, const std::vector<TimingPath>& paths, int instances,
    uint64_t seed);

DegradationLabel label_process_variation(const CircuitGraph& graph, const CellCatalog& catalog,
                                         const Netlist& netlist, const DelayLibrary& library,
                                         const TimingPath& path, int instances, uint64_t seed);

// Deterministic aging label per path (a single aged chip).
std::vector<double> label_paths_aging(const CircuitGraph& graph, const CellCatalog& catalog,
                                      const Netlist& netlist, const DelayLibrary& library,
                                      const std::vector<TimingPath>& paths,
                                      const AgingParams& params, uint64_t seed);

}  // namespace relgraph
