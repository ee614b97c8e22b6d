#include "relgraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "relgraph/rng.hpp"

namespace relgraph {

namespace {

struct KindMix {
  const char* name;
  double base;   // overall prevalence
  double slope;  // >0 grows towards deep layers, <0 towards shallow ones
};

// Shallow layers lean on simple inverting cells, deep layers on wider and
// compound ones; this mirrors how mapped logic tends to look and gives the
// regressor a composition signal that varies along the path depth.
constexpr KindMix kMix[] = {
    {"INV", 1.6, -0.8},  {"BUF", 0.7, -0.6},   {"NAND2", 1.5, -0.3},
    {"NOR2", 1.3, -0.2}, {"AND2", 1.0, 0.2},   {"OR2", 0.9, 0.2},
    {"XOR2", 0.55, 0.9}, {"XNOR2", 0.5, 0.9},  {"AOI21", 0.6, 0.7},
    {"OAI21", 0.6, 0.8}, {"AND3", 0.7, 0.3},
};

}  // namespace

Netlist generate_synthetic_netlist(const SynthConfig& config, const CellCatalog& catalog) {
  if (config.n_gates < 2) throw Error("synthetic generator needs at least two gates");
  if (config.n_inputs < 1) throw Error("synthetic generator needs at least one primary input");
  if (config.dff_fraction < 0 || config.dff_fraction >= 1)
    throw Error("dff_fraction must lie in [0, 1)");

  int dff_kind = catalog.index_of("DFF");
  if (dff_kind < 0) throw UnknownCellError("DFF", "required by the synthetic generator");
  std::vector<int> mix_kind;
  for (const KindMix& m : kMix) {
    int k = catalog.index_of(m.name);
    if (k < 0) throw UnknownCellError(m.name, "required by the synthetic generator");
    mix_kind.push_back(k);
  }

  int n_dff = static_cast<int>(std::lround(config.n_gates * config.dff_fraction));
  n_dff = std::clamp(n_dff, 0, config.n_gates - 1);
  int n_comb = config.n_gates - n_dff;
  int depth = std::clamp(config.depth, 1, n_comb);

  SplitMix64 master(derive_seed(config.seed, 0));

  // Per-design jitter on the cell mix: same recipe across a family of
  // designs, slightly different flavor per seed.
  size_t n_kinds = std::size(kMix);
  std::vector<double> jitter(n_kinds);
  for (size_t k = 0; k < n_kinds; ++k) jitter[k] = std::exp(0.25 * master.next_normal());

  Netlist out;
  out.name = config.name;
  out.clock_period_ns =
      config.clock_period_ns > 0 ? config.clock_period_ns : 0.05 * depth;

  std::vector<std::vector<std::string>> nets_by_layer(static_cast<size_t>(depth) + 1);
  for (int i = 0; i < config.n_inputs; ++i) {
    out.primary_inputs.push_back("in" + std::to_string(i));
    nets_by_layer[0].push_back(out.primary_inputs.back());
  }

  // Flip-flops first: their outputs join layer 0 as launch points; data pins
  // are connected once the combinational fabric exists.
  for (int i = 0; i < n_dff; ++i) {
    GateInstance ff;
    ff.name = "ff" + std::to_string(i);
    ff.kind = dff_kind;
    ff.output = "q" + std::to_string(i);
    out.gates.push_back(std::move(ff));
    nets_by_layer[0].push_back("q" + std::to_string(i));
  }

  // Combinational gates in contiguous layer blocks.
  SplitMix64 wiring(derive_seed(config.seed, 1));
  for (int j = 0; j < n_comb; ++j) {
    int layer = 1 + static_cast<int>((static_cast<int64_t>(j) * depth) / n_comb);
    double pos = depth > 1 ? static_cast<double>(layer - 1) / (depth - 1) : 0.0;

    double total = 0.0;
    std::vector<double> w(n_kinds);
    for (size_t k = 0; k < n_kinds; ++k) {
      w[k] = kMix[k].base * jitter[k] * std::exp(kMix[k].slope * pos);
      total += w[k];
    }
    double pick = wiring.next_double() * total;
    size_t chosen = 0;
    for (size_t k = 0; k < n_kinds; ++k) {
      pick -= w[k];
      if (pick <= 0) {
        chosen = k;
        break;
      }
    }

    GateInstance gate;
    gate.name = "g" + std::to_string(j);
    gate.kind = mix_kind[chosen];
    gate.output = "n" + std::to_string(j);

    // First input comes from the nearest non-empty lower layer so the
    // nominal depth is realized; the rest come from a short window below to
    // keep fan-out local.
    int below = layer - 1;
    while (nets_by_layer[static_cast<size_t>(below)].empty()) --below;
    const auto& prev = nets_by_layer[static_cast<size_t>(below)];
    gate.inputs.push_back(prev[wiring.next_below(prev.size())]);

    int pins = catalog.kind(gate.kind).input_pin_count;
    for (int pin = 1; pin < pins; ++pin) {
      int lo = std::max(0, layer - 4);
      int src_layer = lo + static_cast<int>(wiring.next_below(static_cast<uint64_t>(layer - lo)));
      while (nets_by_layer[static_cast<size_t>(src_layer)].empty()) --src_layer;
      const auto& pool = nets_by_layer[static_cast<size_t>(src_layer)];
      gate.inputs.push_back(pool[wiring.next_below(pool.size())]);
    }
    nets_by_layer[static_cast<size_t>(layer)].push_back(gate.output);
    out.gates.push_back(std::move(gate));
  }

  // Flip-flop data pins: mostly capture the deep layers (long paths), with a
  // uniform share over all layers for path-length diversity.
  SplitMix64 capture(derive_seed(config.seed, 2));
  for (int i = 0; i < n_dff; ++i) {
    int layer;
    double r = capture.next_double();
    if (r < 0.5) {
      layer = depth;
    } else if (r < 0.7 && depth > 1) {
      layer = depth - 1;
    } else {
      layer = 1 + static_cast<int>(capture.next_below(static_cast<uint64_t>(depth)));
    }
    while (nets_by_layer[static_cast<size_t>(layer)].empty()) --layer;
    const auto& pool = nets_by_layer[static_cast<size_t>(layer)];
    out.gates[static_cast<size_t>(i)].inputs.push_back(pool[capture.next_below(pool.size())]);
  }

  // Anything not consumed by a gate becomes a primary output; a design with
  // no dangling nets still gets one PO on the last combinational net.
  std::unordered_set<std::string> consumed;
  for (const auto& gate : out.gates)
    for (const auto& net : gate.inputs) consumed.insert(net);
  for (const auto& gate : out.gates)
    if (!consumed.count(gate.output)) out.primary_outputs.push_back(gate.output);
  if (out.primary_outputs.empty()) out.primary_outputs.push_back(out.gates.back().output);

  validate_netlist(out, catalog);
  return out;
}

}  // namespace relgraph
