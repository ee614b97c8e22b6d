#include "relgraph/circuit_graph.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace relgraph {

CircuitGraph build_graph(const Netlist& netlist, const CellCatalog& catalog) {
  validate_netlist(netlist, catalog);

  CircuitGraph g;
  g.pi_count = static_cast<int>(netlist.primary_inputs.size());
  g.po_count = static_cast<int>(netlist.primary_outputs.size());

  for (const auto& pi : netlist.primary_inputs)
    g.nodes.push_back({CircuitGraph::Role::PrimaryInput, -1, pi});
  for (const auto& po : netlist.primary_outputs)
    g.nodes.push_back({CircuitGraph::Role::PrimaryOutput, -1, po});
  for (const auto& gate : netlist.gates)
    g.nodes.push_back({CircuitGraph::Role::Gate, gate.kind, gate.name});

  // Driver node of each net: the PI node or the producing gate node.
  std::unordered_map<std::string, int> driver;
  for (int i = 0; i < g.pi_count; ++i) driver[netlist.primary_inputs[static_cast<size_t>(i)]] = i;
  for (size_t i = 0; i < netlist.gates.size(); ++i)
    driver[netlist.gates[i].output] = g.gate_node(static_cast<int>(i));

  std::unordered_set<int64_t> seen;
  auto add_edge = [&](int u, int v) {
    int64_t key = static_cast<int64_t>(u) * g.node_count() + v;
    if (seen.insert(key).second) g.edges.emplace_back(u, v);
  };
  for (size_t i = 0; i < netlist.gates.size(); ++i) {
    int v = g.gate_node(static_cast<int>(i));
    for (const auto& net : netlist.gates[i].inputs) add_edge(driver.at(net), v);
  }
  for (int i = 0; i < g.po_count; ++i) {
    const std::string& net = netlist.primary_outputs[static_cast<size_t>(i)];
    add_edge(driver.at(net), g.pi_count + i);
  }
  std::sort(g.edges.begin(), g.edges.end());

  g.out_adj.assign(static_cast<size_t>(g.node_count()), {});
  g.in_adj.assign(static_cast<size_t>(g.node_count()), {});
  g.fanout.assign(static_cast<size_t>(g.node_count()), 0);
  for (const auto& [u, v] : g.edges) {
    g.out_adj[static_cast<size_t>(u)].push_back(v);
    g.in_adj[static_cast<size_t>(v)].push_back(u);
    if (g.nodes[static_cast<size_t>(v)].role != CircuitGraph::Role::PrimaryOutput)
      ++g.fanout[static_cast<size_t>(u)];
  }
  for (auto& a : g.in_adj) std::sort(a.begin(), a.end());
  return g;
}

int feature_index(const CircuitGraph& graph, int node, const CellCatalog& catalog) {
  const CircuitGraph::Node& n = graph.nodes.at(static_cast<size_t>(node));
  switch (n.role) {
    case CircuitGraph::Role::PrimaryInput:
      return catalog.function_count();
    case CircuitGraph::Role::PrimaryOutput:
      return catalog.function_count() + 1;
    case CircuitGraph::Role::Gate:
      return catalog.function_index(catalog.kind(n.kind).function);
  }
  throw Error("unreachable node role");
}

FeatureMatrix encode_features(const CircuitGraph& graph, const CellCatalog& catalog) {
  FeatureMatrix m;
  m.rows = graph.node_count();
  m.cols = catalog.feature_length();
  m.values.assign(static_cast<size_t>(m.rows) * m.cols, 0);
  for (int v = 0; v < m.rows; ++v)
    m.values[static_cast<size_t>(v) * m.cols + feature_index(graph, v, catalog)] = 1;
  return m;
}

namespace {

bool is_dff(const CircuitGraph& g, const CellCatalog& catalog, int v) {
  const auto& n = g.nodes[static_cast<size_t>(v)];
  return n.role == CircuitGraph::Role::Gate && catalog.kind(n.kind).is_sequential;
}

// Arrival used to rank an end point: a PO's own arrival, or the latest
// fan-in arrival at a flip-flop's data pin (the capture side sees the data
// net, not the flop's own launched output).
double endpoint_arrival(const CircuitGraph& g, const std::vector<double>& arrival, int v) {
  if (g.nodes[static_cast<size_t>(v)].role == CircuitGraph::Role::PrimaryOutput)
    return arrival[static_cast<size_t>(v)];
  double best = 0.0;
  for (int u : g.in_adj[static_cast<size_t>(v)])
    best = std::max(best, arrival[static_cast<size_t>(u)]);
  return best;
}

}  // namespace

std::vector<TimingPath> extract_timing_paths(const CircuitGraph& graph,
                                             const CellCatalog& catalog,
                                             const std::vector<double>& arrival,
                                             const PathExtractOptions& options) {
  if (arrival.size() != graph.nodes.size())
    throw LengthMismatchError("arrival vector does not match the node count");

  struct Endpoint {
    double arrival;
    int node;
  };
  std::vector<Endpoint> endpoints;
  for (int v = 0; v < graph.node_count(); ++v) {
    bool eligible = false;
    if (is_dff(graph, catalog, v)) {
      eligible = !graph.in_adj[static_cast<size_t>(v)].empty();
    } else if (!options.dff_endpoints_only &&
               graph.nodes[static_cast<size_t>(v)].role == CircuitGraph::Role::PrimaryOutput) {
      eligible = true;
    }
    if (eligible) endpoints.push_back({endpoint_arrival(graph, arrival, v), v});
  }
  if (endpoints.empty()) throw NoEndpointsError("no timing end points in this design");

  std::sort(endpoints.begin(), endpoints.end(), [](const Endpoint& a, const Endpoint& b) {
    if (a.arrival != b.arrival) return a.arrival > b.arrival;
    return a.node < b.node;
  });

  std::vector<TimingPath> paths;
  for (const Endpoint& ep : endpoints) {
    if (static_cast<int>(paths.size()) >= options.count) break;

    TimingPath path;
    path.end = ep.node;
    path.baseline_delay_ps = ep.arrival;

    // Walk backwards along the latest-arriving fan-in until a launch point
    // (PI or flip-flop output) is reached.
    std::vector<int> reversed;
    int cur = ep.node;
    while (true) {
      const auto& fanin = graph.in_adj[static_cast<size_t>(cur)];
      if (fanin.empty()) break;  // end point fed by nothing upstream of a launch
      int pred = fanin[0];
      for (int u : fanin)
        if (arrival[static_cast<size_t>(u)] > arrival[static_cast<size_t>(pred)]) pred = u;
      if (graph.nodes[static_cast<size_t>(pred)].role == CircuitGraph::Role::PrimaryInput ||
          is_dff(graph, catalog, pred)) {
        path.start = pred;
        break;
      }
      reversed.push_back(pred);
      cur = pred;
    }
    if (path.start < 0 || reversed.empty()) continue;  // no combinational segment
    path.gates.assign(reversed.rbegin(), reversed.rend());
    paths.push_back(std::move(path));
  }
  return paths;
}

int PathSubgraph::local_index(int original_id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), original_id);
  if (it == nodes.end() || *it != original_id) return -1;
  return static_cast<int>(it - nodes.begin());
}

std::vector<std::pair<int, int>> PathSubgraph::local_edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edges.size());
  for (const auto& [u, v] : edges) out.emplace_back(local_index(u), local_index(v));
  return out;
}

PathSubgraph extract_enclosing_subgraph(const CircuitGraph& graph, const CellCatalog& catalog,
                                        const TimingPath& path, int hops) {
  if (hops < 0) throw Error("hop count must be non-negative");

  // Breadth-first expansion from all path gates at once over the undirected
  // skeleton; dist[v] = min over path gates of the undirected distance.
  std::vector<int> dist(static_cast<size_t>(graph.node_count()), -1);
  std::vector<int> frontier;
  for (int v : path.gates) {
    if (v < 0 || v >= graph.node_count()) throw Error("path gate id out of range");
    if (dist[static_cast<size_t>(v)] == -1) {
      dist[static_cast<size_t>(v)] = 0;
      frontier.push_back(v);
    }
  }
  for (int level = 0; level < hops && !frontier.empty(); ++level) {
    std::vector<int> next;
    for (int v : frontier) {
      for (int u : graph.out_adj[static_cast<size_t>(v)])
        if (dist[static_cast<size_t>(u)] == -1) {
          dist[static_cast<size_t>(u)] = level + 1;
          next.push_back(u);
        }
      for (int u : graph.in_adj[static_cast<size_t>(v)])
        if (dist[static_cast<size_t>(u)] == -1) {
          dist[static_cast<size_t>(u)] = level + 1;
          next.push_back(u);
        }
    }
    frontier = std::move(next);
  }

  PathSubgraph sg;
  for (int v = 0; v < graph.node_count(); ++v)
    if (dist[static_cast<size_t>(v)] != -1) sg.nodes.push_back(v);

  std::vector<uint8_t> on_path(static_cast<size_t>(graph.node_count()), 0);
  for (int v : path.gates) on_path[static_cast<size_t>(v)] = 1;

  sg.feature_index.reserve(sg.nodes.size());
  sg.target.reserve(sg.nodes.size());
  for (int v : sg.nodes) {
    sg.feature_index.push_back(feature_index(graph, v, catalog));
    sg.target.push_back(on_path[static_cast<size_t>(v)]);
  }
  for (const auto& [u, v] : graph.edges)
    if (dist[static_cast<size_t>(u)] != -1 && dist[static_cast<size_t>(v)] != -1)
      sg.edges.emplace_back(u, v);
  return sg;
}

}  // namespace relgraph
