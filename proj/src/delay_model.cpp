#include "relgraph/delay_model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "json.hpp"
#include "relgraph/parallel.hpp"
#include "relgraph/rng.hpp"

namespace relgraph {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// DelayLibrary

DelayLibrary DelayLibrary::standard() {
  // Synthetic numbers in the spirit of a mature planar node: intrinsic
  // delays of a handful of ps for simple cells up to ~30 ps for compound
  // ones, per-sink load penalties around a tenth of the intrinsic delay,
  // variation sigmas of a few percent up to 20% for the widest cells, and
  // end-of-life aging slowdowns between 16% and 25%.
  DelayLibrary lib;
  //                      d0     k_load clk2q  sigma  shift  aging
  lib.set("INV", {9.4, 1.1, 0.0, 0.040, 0.002, 0.17});
  lib.set("BUF", {11.0, 0.9, 0.0, 0.035, 0.002, 0.16});
  lib.set("NAND2", {12.4, 1.3, 0.0, 0.060, 0.008, 0.19});
  lib.set("NOR2", {13.1, 1.4, 0.0, 0.065, 0.010, 0.19});
  lib.set("AND2", {17.3, 1.2, 0.0, 0.080, 0.014, 0.21});
  lib.set("OR2", {18.0, 1.2, 0.0, 0.080, 0.014, 0.21});
  lib.set("XOR2", {22.9, 1.6, 0.0, 0.110, 0.030, 0.24});
  lib.set("XNOR2", {23.8, 1.6, 0.0, 0.110, 0.032, 0.24});
  lib.set("AOI21", {26.2, 1.5, 0.0, 0.095, 0.022, 0.22});
  lib.set("OAI21", {30.9, 1.5, 0.0, 0.100, 0.024, 0.22});
  lib.set("AND3", {21.5, 1.3, 0.0, 0.090, 0.016, 0.21});
  // A flip-flop's timing contribution is its clk-to-q launch; d0 only feeds
  // the validity check.
  lib.set("DFF", {3.3, 1.0, 3.3, 0.030, 0.004, 0.18});
  return lib;
}

const CellDelayParams& DelayLibrary::at(const std::string& kind) const {
  auto it = cells_.find(kind);
  if (it == cells_.end()) throw UnknownCellError(kind, "in the delay library");
  return it->second;
}

void DelayLibrary::set(const std::string& kind, const CellDelayParams& params) {
  cells_[kind] = params;
}

void DelayLibrary::validate() const {
  for (const auto& [kind, p] : cells_) {
    if (!(p.d0_ps > 0)) throw Error("library kind '" + kind + "': d0_ps must be positive");
    if (p.k_load_ps < 0) throw Error("library kind '" + kind + "': k_load_ps must be >= 0");
    if (p.clk_to_q_ps < 0) throw Error("library kind '" + kind + "': clk_to_q_ps must be >= 0");
    if (p.sigma_rel < 0 || p.sigma_rel > 0.2)
      throw Error("library kind '" + kind + "': sigma_rel must lie in [0, 0.2]");
    if (p.aging_rel < 0 || p.aging_rel > 1)
      throw Error("library kind '" + kind + "': aging_rel must lie in [0, 1]");
  }
}

DelayLibrary DelayLibrary::parse(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("cells"))
    throw SchemaError("/cells", "missing key");
  const ordered_json& cells = doc["cells"];
  if (!cells.is_object()) throw SchemaError("/cells", "expected an object");
  DelayLibrary lib;
  for (auto it = cells.begin(); it != cells.end(); ++it) {
    std::string path = "/cells/" + it.key();
    const ordered_json& c = it.value();
    if (!c.is_object()) throw SchemaError(path, "expected an object");
    auto num = [&](const char* key, double fallback, bool required) {
      if (!c.contains(key)) {
        if (required) throw SchemaError(path + "/" + key, "missing key");
        return fallback;
      }
      if (!c[key].is_number()) throw SchemaError(path + "/" + key, "expected a number");
      return c[key].get<double>();
    };
    CellDelayParams p;
    p.d0_ps = num("d0_ps", 0.0, true);
    p.k_load_ps = num("k_load_ps", 0.0, false);
    p.clk_to_q_ps = num("clk_to_q_ps", 0.0, false);
    p.sigma_rel = num("sigma_rel", 0.0, false);
    p.var_shift_rel = num("var_shift_rel", 0.0, false);
    p.aging_rel = num("aging_rel", 0.0, false);
    lib.set(it.key(), p);
  }
  lib.validate();
  return lib;
}

std::string DelayLibrary::write() const {
  ordered_json cells = ordered_json::object();
  for (const auto& [kind, p] : cells_) {
    ordered_json c;
    c["d0_ps"] = p.d0_ps;
    c["k_load_ps"] = p.k_load_ps;
    c["clk_to_q_ps"] = p.clk_to_q_ps;
    c["sigma_rel"] = p.sigma_rel;
    c["var_shift_rel"] = p.var_shift_rel;
    c["aging_rel"] = p.aging_rel;
    cells[kind] = std::move(c);
  }
  ordered_json doc;
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

ResolvedLibrary::ResolvedLibrary(const DelayLibrary& library, const CellCatalog& catalog) {
  params_.reserve(static_cast<size_t>(catalog.size()));
  for (const auto& kind : catalog.kinds()) params_.push_back(library.at(kind.name));
}

// ---------------------------------------------------------------------------
// Static timing

double gate_delay(const CellDelayParams& params, int fanout, double multiplier) {
  return (params.d0_ps + params.k_load_ps * fanout) * multiplier;
}

std::vector<double> compute_arrivals(const CircuitGraph& graph, const CellCatalog& catalog,
                                     const ResolvedLibrary& library,
                                     const VariationInstance* instance) {
  int n = graph.node_count();
  std::vector<double> arrival(static_cast<size_t>(n), 0.0);

  auto launches = [&](int v) {
    const auto& node = graph.nodes[static_cast<size_t>(v)];
    if (node.role == CircuitGraph::Role::PrimaryInput) return true;
    return node.role == CircuitGraph::Role::Gate && catalog.kind(node.kind).is_sequential;
  };

  // Kahn order with PIs and flip-flop outputs as sources; edges into a
  // flip-flop only matter for its data arrival, never for its own launch.
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    indeg[static_cast<size_t>(v)] =
        launches(v) ? 0 : static_cast<int>(graph.in_adj[static_cast<size_t>(v)].size());
  std::queue<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<size_t>(v)] == 0) ready.push(v);

  int processed = 0;
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop();
    ++processed;
    const auto& node = graph.nodes[static_cast<size_t>(v)];

    double best_in = 0.0;
    for (int u : graph.in_adj[static_cast<size_t>(v)])
      best_in = std::max(best_in, arrival[static_cast<size_t>(u)]);

    switch (node.role) {
      case CircuitGraph::Role::PrimaryInput:
        arrival[static_cast<size_t>(v)] = 0.0;
        break;
      case CircuitGraph::Role::PrimaryOutput:
        arrival[static_cast<size_t>(v)] = best_in;
        break;
      case CircuitGraph::Role::Gate: {
        const CellDelayParams& p = library.by_kind(node.kind);
        double mult = instance ? instance->multiplier(node.name) : 1.0;
        if (catalog.kind(node.kind).is_sequential) {
          arrival[static_cast<size_t>(v)] = p.clk_to_q_ps * mult;
        } else {
          arrival[static_cast<size_t>(v)] =
              best_in + gate_delay(p, graph.fanout[static_cast<size_t>(v)], mult);
        }
        break;
      }
    }
    for (int u : graph.out_adj[static_cast<size_t>(v)])
      if (!launches(u) && --indeg[static_cast<size_t>(u)] == 0) ready.push(u);
  }
  if (processed != n)
    throw CombinationalCycleError({"(detected during timing; run validate_netlist)"});
  return arrival;
}

double endpoint_data_arrival(const CircuitGraph& graph, const std::vector<double>& arrival,
                             int node) {
  if (graph.nodes[static_cast<size_t>(node)].role == CircuitGraph::Role::PrimaryOutput)
    return arrival[static_cast<size_t>(node)];
  double best = 0.0;
  for (int u : graph.in_adj[static_cast<size_t>(node)])
    best = std::max(best, arrival[static_cast<size_t>(u)]);
  return best;
}

std::vector<EndpointSlack> compute_slacks(const CircuitGraph& graph, const CellCatalog& catalog,
                                          const ResolvedLibrary& library,
                                          double clock_period_ns,
                                          const VariationInstance* instance) {
  std::vector<double> arrival = compute_arrivals(graph, catalog, library, instance);
  double period_ps = clock_period_ns * 1000.0;
  std::vector<EndpointSlack> out;
  for (int v = 0; v < graph.node_count(); ++v) {
    const auto& node = graph.nodes[static_cast<size_t>(v)];
    bool endpoint = false;
    if (node.role == CircuitGraph::Role::PrimaryOutput) {
      endpoint = true;
    } else if (node.role == CircuitGraph::Role::Gate &&
               catalog.kind(node.kind).is_sequential) {
      endpoint = !graph.in_adj[static_cast<size_t>(v)].empty();
    }
    if (!endpoint) continue;
    double a = endpoint_data_arrival(graph, arrival, v);
    out.push_back({v, a, period_ps - a});
  }
  return out;
}

double path_delay(const CircuitGraph& graph, const CellCatalog& catalog,
                  const ResolvedLibrary& library, const TimingPath& path,
                  const VariationInstance* instance) {
  double total = 0.0;
  const auto& start = graph.nodes.at(static_cast<size_t>(path.start));
  if (start.role == CircuitGraph::Role::Gate && catalog.kind(start.kind).is_sequential) {
    double mult = instance ? instance->multiplier(start.name) : 1.0;
    total += library.by_kind(start.kind).clk_to_q_ps * mult;
  }
  for (int v : path.gates) {
    const auto& node = graph.nodes.at(static_cast<size_t>(v));
    if (node.role != CircuitGraph::Role::Gate)
      throw Error("path gate list contains a non-gate node");
    double mult = instance ? instance->multiplier(node.name) : 1.0;
    total += gate_delay(library.by_kind(node.kind), graph.fanout[static_cast<size_t>(v)], mult);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Variation and aging

VariationInstance sample_variation_instance(const Netlist& netlist, const CellCatalog& catalog,
                                            const DelayLibrary& library, uint64_t seed) {
  VariationInstance inst;
  inst.seed = seed;
  inst.multipliers.reserve(netlist.gates.size());
  for (size_t i = 0; i < netlist.gates.size(); ++i) {
    const GateInstance& gate = netlist.gates[i];
    const CellDelayParams& p = library.at(catalog.kind(gate.kind).name);
    SplitMix64 stream(derive_seed(seed, static_cast<uint64_t>(i)));
    inst.multipliers[gate.name] =
        stream.next_truncated_normal(1.0 + p.var_shift_rel, p.sigma_rel);
  }
  return inst;
}

VariationInstance apply_aging(const Netlist& netlist, const CellCatalog& catalog,
                              const DelayLibrary& library, const AgingParams& params,
                              uint64_t seed) {
  VariationInstance inst;
  inst.seed = seed;
  inst.multipliers.reserve(netlist.gates.size());
  for (size_t i = 0; i < netlist.gates.size(); ++i) {
    const GateInstance& gate = netlist.gates[i];
    const CellDelayParams& p = library.at(catalog.kind(gate.kind).name);
    double stress = 1.0;
    if (params.stress_mode == StressMode::Random) {
      SplitMix64 stream(derive_seed(seed, static_cast<uint64_t>(i)));
      stress = stream.next_double();
    }
    inst.multipliers[gate.name] = 1.0 + p.aging_rel * stress * params.global_scale;
  }
  return inst;
}

double degradation_percent(double baseline_ps, double degraded_ps) {
  if (!(baseline_ps > 0))
    throw NonpositiveBaselineError("baseline delay must be positive, got " +
                                   std::to_string(baseline_ps));
  return 100.0 * (degraded_ps - baseline_ps) / baseline_ps;
}

std::vector<DegradationLabel> label_paths_process_variation(
    const CircuitGraph& graph, const CellCatalog& catalog, const Netlist& netlist,
    const DelayLibrary& library, const std::vector<TimingPath>& paths, int instances,
    uint64_t seed) {
  if (instances < 1) throw Error("instance count must be at least 1");
  ResolvedLibrary resolved(library, catalog);

  size_t n_paths = paths.size();
  std::vector<double> baseline(n_paths);
  for (size_t p = 0; p < n_paths; ++p)
    baseline[p] = path_delay(graph, catalog, resolved, paths[p], nullptr);

  // degradation[i * n_paths + p] for chip i, path p. Chips are independent
  // and indexed by derived seed, so the loop can be split across workers
  // without changing any value.
  std::vector<double> degradation(static_cast<size_t>(instances) * n_paths);
  parallel_for(instances, [&](int64_t begin, int64_t end) {
    for (int64_t i = begin; i < end; ++i) {
      VariationInstance chip =
          sample_variation_instance(netlist, catalog, library, derive_seed(seed, static_cast<uint64_t>(i)));
      for (size_t p = 0; p < n_paths; ++p) {
        double degraded = path_delay(graph, catalog, resolved, paths[p], &chip);
        degradation[static_cast<size_t>(i) * n_paths + p] =
            degradation_percent(baseline[p], degraded);
      }
    }
  });

  std::vector<DegradationLabel> labels(n_paths);
  for (size_t p = 0; p < n_paths; ++p) {
    double sum = 0.0;
    double worst = degradation[p];
    for (int i = 0; i < instances; ++i) {
      double d = degradation[static_cast<size_t>(i) * n_paths + p];
      sum += d;
      worst = std::max(worst, d);
    }
    double mu = sum / instances;
    double ss = 0.0;
    for (int i = 0; i < instances; ++i) {
      double d = degradation[static_cast<size_t>(i) * n_paths + p] - mu;
      ss += d * d;
    }
    labels[p].mu = mu;
    labels[p].sigma = instances > 1 ? std::sqrt(ss / (instances - 1)) : 0.0;
    labels[p].max = worst;
  }
  return labels;
}

DegradationLabel label_process_variation(const CircuitGraph& graph, const CellCatalog& catalog,
                                         const Netlist& netlist, const DelayLibrary& library,
                                         const TimingPath& path, int instances, uint64_t seed) {
  return label_paths_process_variation(graph, catalog, netlist, library, {path}, instances,
                                       seed)[0];
}

std::vector<double> label_paths_aging(const CircuitGraph& graph, const CellCatalog& catalog,
                                      const Netlist& netlist, const DelayLibrary& library,
                                      const std::vector<TimingPath>& paths,
                                      const AgingParams& params, uint64_t seed) {
  ResolvedLibrary resolved(library, catalog);
  VariationInstance aged = apply_aging(netlist, catalog, library, params, seed);
  std::vector<double> labels(paths.size());
  for (size_t p = 0; p < paths.size(); ++p) {
    double baseline = path_delay(graph, catalog, resolved, paths[p], nullptr);
    double degraded = path_delay(graph, catalog, resolved, paths[p], &aged);
    labels[p] = degradation_percent(baseline, degraded);
  }
  return labels;
}

}  // namespace relgraph
