#pragma once

// Slow, obviously-correct reference implementations that the fast production
// code is tested against. Each one is written from the definition, not from
// the production algorithm.

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "relgraph/circuit_graph.hpp"
#include "relgraph/delay_model.hpp"

namespace oracles {

// h-ball around a single node on the undirected skeleton, by plain
// frontier-at-a-time search over the edge list (no adjacency reuse).
inline std::set<int> undirected_ball(const relgraph::CircuitGraph& g, int center, int hops) {
  std::set<int> ball = {center};
  std::set<int> frontier = {center};
  for (int step = 0; step < hops; ++step) {
    std::set<int> next;
    for (const auto& [u, v] : g.edges) {
      if (frontier.count(u) && !ball.count(v)) next.insert(v);
      if (frontier.count(v) && !ball.count(u)) next.insert(u);
    }
    for (int v : next) ball.insert(v);
    frontier = std::move(next);
  }
  return ball;
}

// Enclosing-subgraph node set as the union of per-gate balls.
inline std::set<int> ball_union(const relgraph::CircuitGraph& g,
                                const std::vector<int>& centers, int hops) {
  std::set<int> out;
  for (int c : centers) {
    std::set<int> ball = undirected_ball(g, c, hops);
    out.insert(ball.begin(), ball.end());
  }
  return out;
}

// Arrival time by unmemoized recursion: every launch-to-node path is walked
// in full, so this is exhaustive path enumeration. Only usable on small
// netlists.
inline double enum_arrival(const relgraph::CircuitGraph& g, const relgraph::CellCatalog& catalog,
                           const relgraph::ResolvedLibrary& lib,
                           const relgraph::VariationInstance* inst, int v) {
  const auto& node = g.nodes[static_cast<size_t>(v)];
  double best_in = 0.0;
  auto scan_fanin = [&]() {
    for (int u : g.in_adj[static_cast<size_t>(v)])
      best_in = std::max(best_in, enum_arrival(g, catalog, lib, inst, u));
  };
  switch (node.role) {
    case relgraph::CircuitGraph::Role::PrimaryInput:
      return 0.0;
    case relgraph::CircuitGraph::Role::PrimaryOutput:
      scan_fanin();
      return best_in;
    case relgraph::CircuitGraph::Role::Gate: {
      double mult = inst ? inst->multiplier(node.name) : 1.0;
      const relgraph::CellDelayParams& p = lib.by_kind(node.kind);
      if (catalog.kind(node.kind).is_sequential) return p.clk_to_q_ps * mult;
      scan_fanin();
      return best_in + relgraph::gate_delay(p, g.fanout[static_cast<size_t>(v)], mult);
    }
  }
  return 0.0;
}

// Two-pass mean / standard deviation / extrema over one channel of a
// message list, straight from the definitions.
inline std::vector<double> stats_reference(const std::vector<std::vector<double>>& messages,
                                           size_t width, double eps) {
  std::vector<double> out(4 * width, 0.0);
  if (messages.empty()) return out;
  for (size_t ch = 0; ch < width; ++ch) {
    double mean = 0.0;
    for (const auto& m : messages) mean += m[ch];
    mean /= static_cast<double>(messages.size());
    double var = 0.0;
    for (const auto& m : messages) var += (m[ch] - mean) * (m[ch] - mean);
    var /= static_cast<double>(messages.size());  // biased, matching E[z^2]-E[z]^2
    double mx = messages[0][ch], mn = messages[0][ch];
    for (const auto& m : messages) {
      mx = std::max(mx, m[ch]);
      mn = std::min(mn, m[ch]);
    }
    out[ch] = mean;
    out[width + ch] = std::sqrt(std::max(0.0, var) + eps);
    out[2 * width + ch] = mx;
    out[3 * width + ch] = mn;
  }
  return out;
}

}  // namespace oracles
