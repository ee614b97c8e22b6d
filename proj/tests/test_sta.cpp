#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "relgraph/circuit_graph.hpp"
#include "relgraph/delay_model.hpp"
#include "relgraph/parallel.hpp"

using namespace relgraph;

namespace {

struct Built {
  CellCatalog cat = CellCatalog::standard();
  Netlist netlist;
  CircuitGraph graph;
};

Built build_fixture(const std::string& text, double clock_ns = 1.0) {
  Built b;
  b.netlist = parse_structural(text, b.cat, clock_ns);
  b.graph = build_graph(b.netlist, b.cat);
  return b;
}

int node_named(const CircuitGraph& g, const std::string& name) {
  for (int i = 0; i < g.node_count(); ++i)
    if (g.nodes[static_cast<size_t>(i)].name == name) return i;
  return -1;
}

}  // namespace

TEST_CASE("standard delay library is complete and valid") {
  DelayLibrary lib = DelayLibrary::standard();
  CellCatalog cat = CellCatalog::standard();
  CHECK_NOTHROW(lib.validate());
  CHECK_NOTHROW(ResolvedLibrary(lib, cat));
  std::string doc = lib.write();
  DelayLibrary back = DelayLibrary::parse(doc);
  CHECK(back.write() == doc);
  // A library missing a kind the catalog defines is rejected at resolution.
  DelayLibrary partial;
  partial.set("INV", lib.at("INV"));
  CHECK_THROWS_AS(ResolvedLibrary(partial, cat), UnknownCellError);
}

TEST_CASE("library validation bounds") {
  DelayLibrary lib;
  lib.set("INV", {0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(lib.validate(), Error);  // d0 must be positive
  lib.set("INV", {1.0, -0.1, 0.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(lib.validate(), Error);
  lib.set("INV", {1.0, 0.0, 0.0, 0.5, 0.0, 0.0});
  CHECK_THROWS_AS(lib.validate(), Error);  // sigma_rel capped at 0.2
  lib.set("INV", {1.0, 0.0, 0.0, 0.1, 0.0, 1.5});
  CHECK_THROWS_AS(lib.validate(), Error);  // aging_rel capped at 1
  lib.set("INV", {1.0, 0.0, 0.0, 0.1, 0.01, 0.2});
  CHECK_NOTHROW(lib.validate());
}

TEST_CASE("gate delay is linear in loading fanout") {
  DelayLibrary lib = DelayLibrary::standard();
  const CellDelayParams& inv = lib.at("INV");
  CHECK(gate_delay(inv, 0, 1.0) == doctest::Approx(inv.d0_ps));
  CHECK(gate_delay(inv, 3, 1.0) == doctest::Approx(inv.d0_ps + 3 * inv.k_load_ps));
  CHECK(gate_delay(inv, 2, 1.25) == doctest::Approx((inv.d0_ps + 2 * inv.k_load_ps) * 1.25));
}

TEST_CASE("arrival times match exhaustive path enumeration") {
  CellCatalog cat = CellCatalog::standard();
  DelayLibrary dlib = DelayLibrary::standard();
  ResolvedLibrary lib(dlib, cat);
  for (uint64_t seed = 100; seed < 130; ++seed) {
    Netlist n = fixtures::random_netlist(seed, 36);
    CircuitGraph g = build_graph(n, cat);
    VariationInstance chip = sample_variation_instance(n, cat, dlib, derive_seed(seed, 1));
    std::vector<const VariationInstance*> variants = {nullptr, &chip};
    for (const VariationInstance* inst : variants) {
      std::vector<double> got = compute_arrivals(g, cat, lib, inst);
      REQUIRE((int)got.size() == g.node_count());
      for (int v = 0; v < g.node_count(); ++v) {
        double expect = oracles::enum_arrival(g, cat, lib, inst, v);
        CHECK(got[static_cast<size_t>(v)] == doctest::Approx(expect).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("annotated five-stage chain sums to the stage delays") {
  Built b = build_fixture(fixtures::stage_sum_design_text(), 0.2);
  ResolvedLibrary lib(fixtures::unit_library(), b.cat);
  VariationInstance stage = fixtures::stage_sum_design_delays();
  std::vector<double> arrival = compute_arrivals(b.graph, b.cat, lib, &stage);
  auto paths = extract_timing_paths(b.graph, b.cat, arrival, {1, false});
  REQUIRE(paths.size() == 1);
  // 3.3 + 9.4 + 23.8 + 17.3 + 30.9
  CHECK(paths[0].baseline_delay_ps == doctest::Approx(84.7));
  CHECK(path_delay(b.graph, b.cat, lib, paths[0], &stage) == doctest::Approx(84.7));
  // Slack is the 200 ps budget minus the endpoint arrival.
  auto slacks = compute_slacks(b.graph, b.cat, lib, b.netlist.clock_period_ns, &stage);
  bool found = false;
  for (const EndpointSlack& s : slacks) {
    if (s.node == paths[0].end) {
      found = true;
      CHECK(s.arrival_ps == doctest::Approx(84.7));
      CHECK(s.slack_ps == doctest::Approx(200.0 - 84.7));
    }
  }
  CHECK(found);
}

TEST_CASE("two-chip fixture reproduces all four annotated path delays") {
  Built b = build_fixture(fixtures::two_path_chip_text(), 0.25);
  ResolvedLibrary lib(fixtures::unit_library(), b.cat);
  struct Case {
    VariationInstance chip;
    double out2_ps, out1_ps;
  };
  std::vector<Case> cases = {{fixtures::chip1_delays(), 85.8, 80.2},
                             {fixtures::chip2_delays(), 83.5, 85.3}};
  for (const Case& c : cases) {
    std::vector<double> arrival = compute_arrivals(b.graph, b.cat, lib, &c.chip);
    auto paths = extract_timing_paths(b.graph, b.cat, arrival, {2, false});
    REQUIRE(paths.size() == 2);
    double d_out1 = 0, d_out2 = 0;
    for (const TimingPath& p : paths) {
      double d = path_delay(b.graph, b.cat, lib, p, &c.chip);
      CHECK(d == doctest::Approx(p.baseline_delay_ps));
      (b.graph.nodes[static_cast<size_t>(p.end)].name == "out1" ? d_out1 : d_out2) = d;
    }
    CHECK(d_out1 == doctest::Approx(c.out1_ps));
    CHECK(d_out2 == doctest::Approx(c.out2_ps));
  }
}

TEST_CASE("flip-flop endpoints capture data arrival without their own clk-to-q") {
  std::string text = "module m(a,y); input a; output y; wire w, q; "
                     "INV g1(.A(a),.Y(w)); DFF ff(.D(w),.Q(q)); BUF g2(.A(q),.Y(y)); endmodule";
  Built b = build_fixture(text);
  ResolvedLibrary lib(fixtures::unit_library(), b.cat);
  VariationInstance inst;
  inst.multipliers = {{"g1", 2.0}, {"ff", 7.0}, {"g2", 3.0}};
  std::vector<double> arrival = compute_arrivals(b.graph, b.cat, lib, &inst);
  int ff_node = node_named(b.graph, "ff");
  int g2_node = node_named(b.graph, "g2");
  // The flip-flop output launches at clk-to-q (1.0 * 7.0 with the unit
  // library) regardless of its slower data input; the endpoint view of the
  // same node is the data arrival (2.0 through g1).
  CHECK(arrival[static_cast<size_t>(ff_node)] == doctest::Approx(7.0));
  CHECK(endpoint_data_arrival(b.graph, arrival, ff_node) == doctest::Approx(2.0));
  CHECK(arrival[static_cast<size_t>(g2_node)] == doctest::Approx(10.0));
}

TEST_CASE("variation instances are deterministic and in range") {
  CellCatalog cat = CellCatalog::standard();
  Netlist n = fixtures::random_netlist(7, 40);
  DelayLibrary lib = DelayLibrary::standard();
  VariationInstance a = sample_variation_instance(n, cat, lib, 1234);
  VariationInstance b = sample_variation_instance(n, cat, lib, 1234);
  VariationInstance c = sample_variation_instance(n, cat, lib, 1235);
  CHECK(a.multipliers == b.multipliers);
  CHECK(a.multipliers != c.multipliers);
  REQUIRE(a.multipliers.size() == n.gates.size());
  // Multipliers stay within the truncation window around the shifted mean.
  for (const GateInstance& g : n.gates) {
    const CellDelayParams& p = lib.at(cat.kind(g.kind).name);
    double m = a.multiplier(g.name);
    CHECK(m >= 1.0 + p.var_shift_rel - 3.0 * p.sigma_rel - 1e-12);
    CHECK(m <= 1.0 + p.var_shift_rel + 3.0 * p.sigma_rel + 1e-12);
  }
  // Unknown gate names fall back to the nominal multiplier.
  CHECK(a.multiplier("no_such_gate") == 1.0);
}

TEST_CASE("zero sigma collapses each multiplier onto its shifted mean") {
  CellCatalog cat = CellCatalog::standard();
  Netlist n = fixtures::random_netlist(3, 24);
  DelayLibrary lib = DelayLibrary::standard();
  for (const auto& [name, params] : lib.cells()) {
    CellDelayParams p = params;
    p.sigma_rel = 0.0;
    lib.set(name, p);
  }
  VariationInstance inst = sample_variation_instance(n, cat, lib, 42);
  for (const GateInstance& g : n.gates)
    CHECK(inst.multiplier(g.name) ==
          doctest::Approx(1.0 + lib.at(cat.kind(g.kind).name).var_shift_rel));
}

TEST_CASE("aging multipliers scale with stress and the global factor") {
  CellCatalog cat = CellCatalog::standard();
  Netlist n = fixtures::random_netlist(5, 24);
  DelayLibrary lib = DelayLibrary::standard();
  VariationInstance worst = apply_aging(n, cat, lib, {StressMode::WorstCase, 1.0}, 99);
  for (const GateInstance& g : n.gates)
    CHECK(worst.multiplier(g.name) ==
          doctest::Approx(1.0 + lib.at(cat.kind(g.kind).name).aging_rel));
  VariationInstance half = apply_aging(n, cat, lib, {StressMode::WorstCase, 0.5}, 99);
  for (const GateInstance& g : n.gates)
    CHECK(half.multiplier(g.name) ==
          doctest::Approx(1.0 + 0.5 * lib.at(cat.kind(g.kind).name).aging_rel));
  VariationInstance r1 = apply_aging(n, cat, lib, {StressMode::Random, 1.0}, 77);
  VariationInstance r2 = apply_aging(n, cat, lib, {StressMode::Random, 1.0}, 77);
  CHECK(r1.multipliers == r2.multipliers);
  for (const GateInstance& g : n.gates) {
    CHECK(r1.multiplier(g.name) >= 1.0 - 1e-12);
    CHECK(r1.multiplier(g.name) <= worst.multiplier(g.name) + 1e-12);
  }
}

TEST_CASE("degradation percent definition and guards") {
  CHECK(degradation_percent(100.0, 110.0) == doctest::Approx(10.0));
  CHECK(degradation_percent(100.0, 95.0) == doctest::Approx(-5.0));
  CHECK_THROWS_AS(degradation_percent(0.0, 1.0), NonpositiveBaselineError);
  CHECK_THROWS_AS(degradation_percent(-2.0, 1.0), NonpositiveBaselineError);
}

TEST_CASE("variation labels match a direct reimplementation") {
  CellCatalog cat = CellCatalog::standard();
  Netlist n = fixtures::random_netlist(21, 48);
  CircuitGraph g = build_graph(n, cat);
  DelayLibrary dlib = DelayLibrary::standard();
  ResolvedLibrary lib(dlib, cat);
  std::vector<double> arrival = compute_arrivals(g, cat, lib);
  auto paths = extract_timing_paths(g, cat, arrival, {4, false});
  REQUIRE(paths.size() >= 2);

  const int instances = 40;
  const uint64_t seed = 2024;
  auto labels = label_paths_process_variation(g, cat, n, dlib, paths, instances, seed);
  REQUIRE(labels.size() == paths.size());

  for (size_t pi = 0; pi < paths.size(); ++pi) {
    // Recompute from scratch: same chips, one path at a time.
    std::vector<double> degr(instances);
    for (int i = 0; i < instances; ++i) {
      VariationInstance chip =
          sample_variation_instance(n, cat, dlib, derive_seed(seed, (uint64_t)i));
      double d = path_delay(g, cat, lib, paths[pi], &chip);
      degr[static_cast<size_t>(i)] = degradation_percent(paths[pi].baseline_delay_ps, d);
    }
    double mean = 0;
    for (double d : degr) mean += d;
    mean /= instances;
    double var = 0, mx = degr[0];
    for (double d : degr) {
      var += (d - mean) * (d - mean);
      mx = std::max(mx, d);
    }
    var /= (instances - 1);
    CHECK(labels[pi].mu == doctest::Approx(mean).epsilon(1e-9));
    CHECK(labels[pi].sigma == doctest::Approx(std::sqrt(var)).epsilon(1e-9));
    CHECK(labels[pi].max == doctest::Approx(mx).epsilon(1e-9));
    // The single-path entry point agrees with the batch.
    DegradationLabel single = label_process_variation(g, cat, n, dlib, paths[pi], instances, seed);
    CHECK(single.mu == doctest::Approx(labels[pi].mu));
    CHECK(single.sigma == doctest::Approx(labels[pi].sigma));
    CHECK(single.max == doctest::Approx(labels[pi].max));
  }
}

TEST_CASE("variation labels are invariant to the thread count") {
  CellCatalog cat = CellCatalog::standard();
  Netlist n = fixtures::random_netlist(22, 40);
  CircuitGraph g = build_graph(n, cat);
  DelayLibrary dlib = DelayLibrary::standard();
  ResolvedLibrary lib(dlib, cat);
  std::vector<double> arrival = compute_arrivals(g, cat, lib);
  auto paths = extract_timing_paths(g, cat, arrival, {3, false});
  set_thread_count(1);
  auto one = label_paths_process_variation(g, cat, n, dlib, paths, 24, 5);
  set_thread_count(3);
  auto three = label_paths_process_variation(g, cat, n, dlib, paths, 24, 5);
  set_thread_count(1);
  REQUIRE(one.size() == three.size());
  for (size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].mu == three[i].mu);
    CHECK(one[i].sigma == three[i].sigma);
    CHECK(one[i].max == three[i].max);
  }
}

TEST_CASE("aging labels use the degraded chip against the nominal baseline") {
  CellCatalog cat = CellCatalog::standard();
  Netlist n = fixtures::random_netlist(23, 40);
  CircuitGraph g = build_graph(n, cat);
  DelayLibrary dlib = DelayLibrary::standard();
  ResolvedLibrary lib(dlib, cat);
  std::vector<double> arrival = compute_arrivals(g, cat, lib);
  auto paths = extract_timing_paths(g, cat, arrival, {3, false});
  AgingParams params{StressMode::WorstCase, 1.0};
  auto vals = label_paths_aging(g, cat, n, dlib, paths, params, 11);
  REQUIRE(vals.size() == paths.size());
  VariationInstance aged = apply_aging(n, cat, dlib, params, 11);
  for (size_t i = 0; i < paths.size(); ++i) {
    double d = path_delay(g, cat, lib, paths[i], &aged);
    CHECK(vals[i] ==
          doctest::Approx(degradation_percent(paths[i].baseline_delay_ps, d)).epsilon(1e-12));
    CHECK(vals[i] > 0.0);
  }
}
