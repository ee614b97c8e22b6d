#pragma once

// Hand-built circuits and delay tables reused across the test suites.

#include <string>

#include "relgraph/delay_model.hpp"
#include "relgraph/netlist.hpp"
#include "relgraph/rng.hpp"
#include "relgraph/synth.hpp"

namespace fixtures {

// Small sequential design with one register-to-register path whose three
// combinational gates have a known 1-hop neighborhood:
//   in1 -> DFF1 -> G2(NAND2) <- G1(INV) <- in2
//   G2 -> G3(INV) -> {G4(NAND2), G5(INV)}
//   G4 (other pin from DFF1) -> DFF2 -> out1, G5 -> out2
// The worst path DFF1 -> G2 -> G3 -> G4 -> DFF2 has target set {G2, G3, G4};
// its 1-hop ball adds exactly DFF1, DFF2, G1, and G5.
inline std::string path_neighborhood_text() {
  return R"(module path_neighborhood(in1, in2, out1, out2);
  input in1, in2;
  output out1, out2;
  wire d1q, g1y, g2y, g3y, g4y, d2q;
  DFF   DFF1(.D(in1), .Q(d1q));
  INV   G1(.A(in2), .Y(g1y));
  NAND2 G2(.A(d1q), .B(g1y), .Y(g2y));
  INV   G3(.A(g2y), .Y(g3y));
  NAND2 G4(.A(g3y), .B(d1q), .Y(g4y));
  INV   G5(.A(g3y), .Y(out2));
  DFF   DFF2(.D(g4y), .Q(out1));
endmodule
)";
}

// Single-path circuit whose annotated stage delays sum to 84.7 ps:
// DFF 3.3, INV 9.4, XNOR 23.8, AND 17.3, OAI21 30.9.
inline std::string stage_sum_design_text() {
  return R"(module stage_sum_design(in, out);
  input in;
  output out;
  wire ffq, w1, w2, w3;
  DFF   ff1(.D(in), .Q(ffq));
  INV   g1(.A(ffq), .Y(w1));
  XNOR2 g2(.A(w1), .B(ffq), .Y(w2));
  AND2  g3(.A(w2), .B(w1), .Y(w3));
  OAI21 g4(.A(w3), .B(w2), .C(w1), .Y(out));
endmodule
)";
}

// Two-register, two-path circuit used for per-chip stage-delay totals and
// for the critical-path flip checks. Path 1 (5 stages) ends at out1, path 2
// (7 stages) at out2; side pins reuse upstream nets so each path stays the
// latest arrival into its own output.
inline std::string two_path_chip_text() {
  return R"(module two_path_chip(in, out1, out2);
  input in;
  output out1, out2;
  wire q1, q2, a1, a2, a3, b1, b2, b3, b4, b5;
  DFF   ff1(.D(in), .Q(q1));
  DFF   ff2(.D(in), .Q(q2));
  NOR2  p1g1(.A(q1), .B(in), .Y(a1));
  INV   p1g2(.A(a1), .Y(a2));
  NAND2 p1g3(.A(a2), .B(q1), .Y(a3));
  XNOR2 p1g4(.A(a3), .B(a1), .Y(out1));
  INV   p2g1(.A(q2), .Y(b1));
  INV   p2g2(.A(b1), .Y(b2));
  NAND2 p2g3(.A(b2), .B(q2), .Y(b3));
  NAND2 p2g4(.A(b3), .B(b1), .Y(b4));
  NOR2  p2g5(.A(b4), .B(b2), .Y(b5));
  NAND2 p2g6(.A(b5), .B(b1), .Y(out2));
endmodule
)";
}

// Library where every kind contributes exactly 1 ps per stage with no load
// term, so per-gate multipliers express annotated stage delays directly.
inline relgraph::DelayLibrary unit_library() {
  relgraph::DelayLibrary lib;
  relgraph::CellCatalog catalog = relgraph::CellCatalog::standard();
  for (const auto& kind : catalog.kinds())
    lib.set(kind.name, {1.0, 0.0, kind.is_sequential ? 1.0 : 0.0, 0.0, 0.0, 0.0});
  return lib;
}

// Annotated stage delays, one multiplier per gate instance.
inline relgraph::VariationInstance stage_sum_design_delays() {
  relgraph::VariationInstance inst;
  inst.multipliers = {{"ff1", 3.3}, {"g1", 9.4}, {"g2", 23.8}, {"g3", 17.3}, {"g4", 30.9}};
  return inst;
}

inline relgraph::VariationInstance chip1_delays() {
  relgraph::VariationInstance inst;
  inst.multipliers = {
      {"ff1", 5.1}, {"p1g1", 10.2}, {"p1g2", 12.0}, {"p1g3", 14.5}, {"p1g4", 38.4},
      {"ff2", 2.9}, {"p2g1", 9.9},  {"p2g2", 11.2}, {"p2g3", 10.3}, {"p2g4", 11.0},
      {"p2g5", 11.7}, {"p2g6", 28.8},
  };
  return inst;
}

inline relgraph::VariationInstance chip2_delays() {
  relgraph::VariationInstance inst;
  inst.multipliers = {
      {"ff1", 5.1}, {"p1g1", 11.4}, {"p1g2", 12.9}, {"p1g3", 16.5}, {"p1g4", 39.4},
      {"ff2", 3.0}, {"p2g1", 11.1}, {"p2g2", 9.8},  {"p2g3", 10.1}, {"p2g4", 12.0},
      {"p2g5", 11.4}, {"p2g6", 26.1},
  };
  return inst;
}

// Random small DAG for oracle comparisons: gates with one or two inputs
// drawn from earlier nets, a sprinkle of flip-flops, everything unconsumed
// exposed as a primary output.
inline relgraph::Netlist random_netlist(uint64_t seed, int n_gates) {
  relgraph::SynthConfig cfg;
  cfg.name = "rand" + std::to_string(seed);
  cfg.n_gates = n_gates;
  cfg.dff_fraction = 0.2;
  cfg.n_inputs = 4;
  cfg.depth = std::max(2, n_gates / 6);
  cfg.seed = seed;
  return relgraph::generate_synthetic_netlist(cfg, relgraph::CellCatalog::standard());
}

}  // namespace fixtures
