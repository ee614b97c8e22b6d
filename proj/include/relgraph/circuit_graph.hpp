#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relgraph/netlist.hpp"

namespace relgraph {

// Directed graph view of a netlist. Node ids are assigned in a fixed order:
// primary inputs (in declaration order), then primary outputs, then gates.
// PI/PO nodes are named after their net; gate nodes after their instance.
struct CircuitGraph {
  enum class Role : uint8_t { PrimaryInput, PrimaryOutput, Gate };

  struct Node {
    Role role = Role::Gate;
    int kind = -1;  // catalog kind index; -1 for PI/PO nodes
    std::string name;
  };

  std::vector<Node> nodes;
  std::vector<std::pair<int, int>> edges;  // deduplicated, sorted by (src, dst)
  std::vector<std::vector<int>> out_adj;   // ascending neighbor ids
  std::vector<std::vector<int>> in_adj;    // ascending neighbor ids
  std::vector<int> fanout;                 // out-neighbors that are not POs
  int pi_count = 0;
  int po_count = 0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int gate_node(int gate_index) const { return pi_count + po_count + gate_index; }
  bool is_gate(int v) const { return nodes[static_cast<size_t>(v)].role == Role::Gate; }
};

// Builds the graph: one node per PI, PO, and gate; an edge u -> v whenever
// u's output net feeds v. A gate consuming the same net on two pins still
// yields a single edge.
CircuitGraph build_graph(const Netlist& netlist, const CellCatalog& catalog);

// Dense one-hot node features. Column layout: one column per distinct
// catalog function tag (catalog order), then a PI column, then a PO column.
struct FeatureMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> values;  // row-major

  int at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
};

// Feature column for one node (the position of its one-hot bit).
int feature_index(const CircuitGraph& graph, int node, const CellCatalog& catalog);

FeatureMatrix encode_features(const CircuitGraph& graph, const CellCatalog& catalog);

// One extracted register-to-register (or port-bounded) timing path.
struct TimingPath {
  int start = -1;                // PI or flip-flop node launching the path
  int end = -1;                  // PO or flip-flop node capturing the path
  std::vector<int> gates;        // combinational gate nodes, start side first
  double baseline_delay_ps = 0;  // arrival at the end point
};

struct PathExtractOptions {
  int count = 1;
  bool dff_endpoints_only = false;  // drop PO end points, keep flip-flop D inputs
};

// Selects the `count` worst-arrival end points (ties broken by ascending
// node id) and walks each one backwards along its latest-arriving fan-in
// (ties broken by smallest node id). End points whose combinational segment
// is empty are skipped. Throws NoEndpointsError when nothing is eligible.
std::vector<TimingPath> extract_timing_paths(const CircuitGraph& graph,
                                             const CellCatalog& catalog,
                                             const std::vector<double>& arrival,
                                             const PathExtractOptions& options);

// The h-hop neighborhood of a path, used as the model input. Node and edge
// lists keep original graph ids; `target` marks the path's own gates.
struct PathSubgraph {
  std::vector<int> nodes;                  // ascending original ids
  std::vector<int> feature_index;          // per node, parent-graph feature column
  std::vector<uint8_t> target;             // per node, 1 = on the path
  std::vector<std::pair<int, int>> edges;  // original ids, sorted by (src, dst)
  std::vector<double> label;               // empty, {value}, or {mu, sigma, max}
  std::string design;
  int path_index = -1;

  int node_count() const { return static_cast<int>(nodes.size()); }
  // Position of an original node id in `nodes`, or -1.
  int local_index(int original_id) const;
  // Edges rewritten to positions in `nodes`.
  std::vector<std::pair<int, int>> local_edges() const;
};

// Union of the h-balls around every path gate, measured on the undirected
// skeleton; the induced edges keep their original directions. h = 0 returns
// the path gates themselves plus any edges among them.
PathSubgraph extract_enclosing_subgraph(const CircuitGraph& graph, const CellCatalog& catalog,
                                        const TimingPath& path, int hops);

}  // namespace relgraph
