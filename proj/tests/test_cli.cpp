// End-to-end tests for the command-line front end. Each case shells out to
// the real binary (path in RELGRAPH_BIN) and checks the files it writes,
// usually against the same computation done in-process.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "relgraph/checkpoint.hpp"
#include "relgraph/circuit_graph.hpp"
#include "relgraph/dataset.hpp"
#include "relgraph/delay_model.hpp"
#include "relgraph/errors.hpp"
#include "relgraph/netlist.hpp"
#include "relgraph/pna.hpp"
#include "relgraph/synth.hpp"

using namespace relgraph;
namespace fsys = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

const std::string kWork = "cli_work";

std::string binary() {
  const char* p = std::getenv("RELGRAPH_BIN");
  REQUIRE_MESSAGE(p != nullptr, "RELGRAPH_BIN must point at the relgraph binary");
  return p;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs `relgraph <args>` through the shell, capturing exit code and streams.
// `env_prefix` lets a case set environment variables for one invocation.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int invocation = 0;
  fsys::create_directories(kWork);
  std::string out_path = kWork + "/stdout_" + std::to_string(invocation) + ".txt";
  std::string err_path = kWork + "/stderr_" + std::to_string(invocation) + ".txt";
  ++invocation;
  std::string cmd = (env_prefix.empty() ? "" : env_prefix + " ") + "\"" + binary() + "\" " +
                    args + " >" + out_path + " 2>" + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  r.out = read_text_file(out_path);
  r.err = read_text_file(err_path);
  return r;
}

std::vector<ordered_json> parse_jsonl(const std::string& text) {
  std::vector<ordered_json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(ordered_json::parse(line));
  return out;
}

// Fresh per-case directory under the shared work root.
std::string case_dir(const std::string& name) {
  std::string dir = kWork + "/" + name;
  fsys::remove_all(dir);
  fsys::create_directories(dir);
  return dir;
}

std::string write_two_path_design(const std::string& dir) {
  std::string path = dir + "/two_path.v";
  write_text_file(path, fixtures::two_path_chip_text());
  return path;
}

}  // namespace

TEST_CASE("convert reads structural text and writes canonical JSON") {
  std::string dir = case_dir("convert");
  std::string in_path = write_two_path_design(dir);

  RunResult r = run_cli("convert --netlist " + in_path + " --out " + dir + "/chip.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("wrote " + dir + "/chip.json") != std::string::npos);

  CellCatalog catalog = CellCatalog::standard();
  Netlist direct = parse_structural(fixtures::two_path_chip_text(), catalog);
  Netlist converted = parse_canonical(read_text_file(dir + "/chip.json"), catalog);
  CHECK(converted == direct);

  // Canonical input is auto-detected, and re-converting is byte-stable.
  RunResult r2 =
      run_cli("convert --netlist " + dir + "/chip.json --out " + dir + "/chip2.json");
  CHECK(r2.exit_code == 0);
  CHECK(read_text_file(dir + "/chip2.json") == read_text_file(dir + "/chip.json"));
}

TEST_CASE("synth-bench is seed-deterministic and honors the seed env variable") {
  std::string dir = case_dir("synth");
  std::string base =
      "synth-bench --name tiny --gates 30 --inputs 4 --depth 3 --out " + dir + "/";

  CHECK(run_cli("--seed 5 " + base + "a.json").exit_code == 0);
  CHECK(run_cli("--seed 5 " + base + "b.json").exit_code == 0);
  CHECK(run_cli("--seed 6 " + base + "c.json").exit_code == 0);
  CHECK(run_cli(base + "d.json", "RELGRAPH_SEED=5").exit_code == 0);

  std::string a = read_text_file(dir + "/a.json");
  CHECK(a == read_text_file(dir + "/b.json"));
  CHECK(a != read_text_file(dir + "/c.json"));
  CHECK(a == read_text_file(dir + "/d.json"));

  CellCatalog catalog = CellCatalog::standard();
  Netlist n = parse_canonical(a, catalog);
  validate_netlist(n, catalog);
  CHECK(n.name == "tiny");
  CHECK(n.gates.size() == 30);
}

TEST_CASE("paths ranks endpoints and notes when fewer exist than asked") {
  std::string dir = case_dir("paths");
  std::string in_path = write_two_path_design(dir);

  // The flip-flops load straight from the input port, so only the two output
  // ports end usable paths.
  RunResult r = run_cli("paths --netlist " + in_path + " --count 5 --out " + dir +
                        "/paths.jsonl");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("only 2 of 5 requested paths exist") != std::string::npos);

  std::vector<ordered_json> rows = parse_jsonl(read_text_file(dir + "/paths.jsonl"));
  REQUIRE(rows.size() == 2);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i]["design"] == "two_path_chip");
    CHECK(rows[i]["path_index"] == static_cast<int>(i));
    CHECK(rows[i]["gate_names"].size() == rows[i]["gates"].size());
    if (i > 0)
      CHECK(rows[i]["baseline_delay_ps"].get<double>() <=
            rows[i - 1]["baseline_delay_ps"].get<double>());
    double period_ps = 1000.0;
    CHECK(rows[i]["slack_ps"].get<double>() ==
          doctest::Approx(period_ps - rows[i]["baseline_delay_ps"].get<double>()));
  }

  // Flip-flop-only endpoints need a register-to-register design.
  std::string r2r = dir + "/r2r.v";
  write_text_file(r2r, fixtures::path_neighborhood_text());
  RunResult dff = run_cli("paths --netlist " + r2r + " --count 5 --dff-only --out " + dir +
                          "/dff.jsonl");
  CHECK(dff.exit_code == 0);
  CHECK(dff.err.find("only 1 of 5 requested paths exist") != std::string::npos);
  std::vector<ordered_json> dff_rows = parse_jsonl(read_text_file(dir + "/dff.jsonl"));
  REQUIRE(dff_rows.size() == 1);
  // With the built-in library the inverter's arrival beats the flip-flop
  // clock-to-Q, so the trace into G2 detours through G1 back to the port.
  CHECK(dff_rows[0]["start_name"] == "in2");
  CHECK(dff_rows[0]["end_name"] == "DFF2");
  CHECK(dff_rows[0]["gate_names"] == ordered_json::array({"G1", "G2", "G3", "G4"}));
}

TEST_CASE("label reproduces the in-process Monte-Carlo and aging numbers") {
  std::string dir = case_dir("label");
  std::string in_path = write_two_path_design(dir);
  REQUIRE(run_cli("paths --netlist " + in_path + " --count 2 --out " + dir + "/paths.jsonl")
              .exit_code == 0);

  RunResult var = run_cli("--seed 3 label --netlist " + in_path + " --paths " + dir +
                          "/paths.jsonl --target variation --instances 16 --out " + dir +
                          "/var.jsonl");
  CHECK(var.exit_code == 0);

  CellCatalog catalog = CellCatalog::standard();
  DelayLibrary library = DelayLibrary::standard();
  Netlist n = parse_structural(fixtures::two_path_chip_text(), catalog);
  CircuitGraph graph = build_graph(n, catalog);
  ResolvedLibrary lib(library, catalog);
  std::vector<double> arrival = compute_arrivals(graph, catalog, lib, nullptr);
  PathExtractOptions opt;
  opt.count = 2;
  std::vector<TimingPath> paths = extract_timing_paths(graph, catalog, arrival, opt);
  REQUIRE(paths.size() == 2);
  auto expected = label_paths_process_variation(graph, catalog, n, library, paths, 16, 3);

  std::vector<ordered_json> rows = parse_jsonl(read_text_file(dir + "/var.jsonl"));
  REQUIRE(rows.size() == expected.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i]["label"].is_array());
    REQUIRE(rows[i]["label"].size() == 3);
    CHECK(rows[i]["label"][0].get<double>() == doctest::Approx(expected[i].mu).epsilon(1e-12));
    CHECK(rows[i]["label"][1].get<double>() ==
          doctest::Approx(expected[i].sigma).epsilon(1e-12));
    CHECK(rows[i]["label"][2].get<double>() == doctest::Approx(expected[i].max).epsilon(1e-12));
  }

  RunResult aging = run_cli("--seed 3 label --netlist " + in_path + " --paths " + dir +
                            "/paths.jsonl --target aging --mode worst --scale 0.5 --out " +
                            dir + "/aging.jsonl");
  CHECK(aging.exit_code == 0);
  AgingParams params;
  params.stress_mode = StressMode::WorstCase;
  params.global_scale = 0.5;
  std::vector<double> aging_expected =
      label_paths_aging(graph, catalog, n, library, paths, params, 3);
  std::vector<ordered_json> aging_rows = parse_jsonl(read_text_file(dir + "/aging.jsonl"));
  REQUIRE(aging_rows.size() == aging_expected.size());
  for (size_t i = 0; i < aging_rows.size(); ++i) {
    REQUIRE(aging_rows[i]["label"].is_number());
    CHECK(aging_rows[i]["label"].get<double>() ==
          doctest::Approx(aging_expected[i]).epsilon(1e-12));
  }

  RunResult bad = run_cli("label --netlist " + in_path + " --paths " + dir +
                          "/paths.jsonl --target banana --out " + dir + "/bad.jsonl");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("error:") == 0);
  CHECK(bad.err.find("banana") != std::string::npos);
}

TEST_CASE("extract merges labels into hop-controlled subgraph samples") {
  std::string dir = case_dir("extract");
  std::string in_path = write_two_path_design(dir);
  REQUIRE(run_cli("paths --netlist " + in_path + " --count 2 --out " + dir + "/paths.jsonl")
              .exit_code == 0);
  REQUIRE(run_cli("--seed 3 label --netlist " + in_path + " --paths " + dir +
                  "/paths.jsonl --instances 8 --out " + dir + "/labels.jsonl")
              .exit_code == 0);

  RunResult r = run_cli("extract --netlist " + in_path + " --paths " + dir +
                        "/paths.jsonl --labels " + dir + "/labels.jsonl --hop 1 --out " +
                        dir + "/samples.jsonl");
  CHECK(r.exit_code == 0);
  std::vector<LabeledSample> samples = load_samples(dir + "/samples.jsonl");
  REQUIRE(samples.size() == 2);

  CellCatalog catalog = CellCatalog::standard();
  Netlist n = parse_structural(fixtures::two_path_chip_text(), catalog);
  CircuitGraph graph = build_graph(n, catalog);
  ResolvedLibrary lib(DelayLibrary::standard(), catalog);
  std::vector<double> arrival = compute_arrivals(graph, catalog, lib, nullptr);
  PathExtractOptions opt;
  opt.count = 2;
  std::vector<TimingPath> paths = extract_timing_paths(graph, catalog, arrival, opt);
  for (size_t i = 0; i < samples.size(); ++i) {
    PathSubgraph expected = extract_enclosing_subgraph(graph, catalog, paths[i], 1);
    CHECK(samples[i].design == "two_path_chip");
    CHECK(samples[i].path_index == static_cast<int>(i));
    CHECK(samples[i].nodes == expected.nodes);
    CHECK(samples[i].edges == expected.edges);
    REQUIRE(samples[i].label.size() == 3);
  }

  // hop 0 keeps only the path gates themselves.
  REQUIRE(run_cli("extract --netlist " + in_path + " --paths " + dir +
                  "/paths.jsonl --labels " + dir + "/labels.jsonl --hop 0 --out " + dir +
                  "/tight.jsonl")
              .exit_code == 0);
  std::vector<LabeledSample> tight = load_samples(dir + "/tight.jsonl");
  for (size_t i = 0; i < tight.size(); ++i) {
    std::vector<int> gates = paths[i].gates;
    std::sort(gates.begin(), gates.end());
    CHECK(tight[i].nodes == gates);
  }

  // A labels file that misses a path is an error.
  std::vector<ordered_json> label_rows = parse_jsonl(read_text_file(dir + "/labels.jsonl"));
  write_text_file(dir + "/short.jsonl", label_rows[0].dump() + "\n");
  RunResult missing = run_cli("extract --netlist " + in_path + " --paths " + dir +
                              "/paths.jsonl --labels " + dir + "/short.jsonl --out " + dir +
                              "/broken.jsonl");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("missing label for path 1") != std::string::npos);
}

TEST_CASE("split writes the three sets plus a manifest") {
  std::string dir = case_dir("split");
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 20; ++i) {
    LabeledSample s;
    s.design = "solo";
    s.path_index = i;
    s.nodes = {i};
    s.feature_index = {0};
    s.target = {1};
    s.label = {static_cast<double>(i)};
    samples.push_back(std::move(s));
  }
  save_samples(samples, dir + "/samples.jsonl");

  RunResult r = run_cli("--seed 11 split --samples " + dir + "/samples.jsonl --out-dir " +
                        dir + "/splits");
  CHECK(r.exit_code == 0);
  std::vector<LabeledSample> train = load_samples(dir + "/splits/train.jsonl");
  std::vector<LabeledSample> val = load_samples(dir + "/splits/val.jsonl");
  std::vector<LabeledSample> test = load_samples(dir + "/splits/test.jsonl");
  CHECK(train.size() == 16);  // floor(0.81 * 20)
  CHECK(val.size() == 2);
  CHECK(test.size() == 2);

  SplitResult expected = split_self_referencing(samples, 11);
  for (size_t i = 0; i < train.size(); ++i)
    CHECK(train[i].path_index == expected.train[i].path_index);
  for (size_t i = 0; i < test.size(); ++i)
    CHECK(test[i].path_index == expected.test[i].path_index);

  ordered_json manifest = ordered_json::parse(read_text_file(dir + "/splits/split.json"));
  CHECK(manifest["scenario"] == "self");
  CHECK(manifest["seed"] == 11);
  CHECK(manifest["train"] == 16);
  CHECK(manifest["val"] == 2);
  CHECK(manifest["test"] == 2);

  RunResult bad = run_cli("split --samples " + dir + "/samples.jsonl --scenario dataset " +
                          "--out-dir " + dir + "/nope");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("--test-design") != std::string::npos);

  RunResult unknown = run_cli("split --samples " + dir + "/samples.jsonl --scenario bogus " +
                              "--out-dir " + dir + "/nope");
  CHECK(unknown.exit_code == 1);
  CHECK(unknown.err.find("bogus") != std::string::npos);
}

TEST_CASE("train, predict, and eval chain through files") {
  std::string dir = case_dir("chain");
  REQUIRE(run_cli("--seed 21 synth-bench --name bench --gates 60 --inputs 6 --depth 4 "
                  "--dff-fraction 0.4 --out " +
                  dir + "/bench.json")
              .exit_code == 0);
  REQUIRE(run_cli("paths --netlist " + dir + "/bench.json --count 15 --out " + dir +
                  "/paths.jsonl")
              .exit_code == 0);
  REQUIRE(run_cli("--seed 21 label --netlist " + dir + "/bench.json --paths " + dir +
                  "/paths.jsonl --instances 12 --out " + dir + "/labels.jsonl")
              .exit_code == 0);
  REQUIRE(run_cli("extract --netlist " + dir + "/bench.json --paths " + dir +
                  "/paths.jsonl --labels " + dir + "/labels.jsonl --hop 1 --out " + dir +
                  "/samples.jsonl")
              .exit_code == 0);
  REQUIRE(run_cli("--seed 21 split --samples " + dir + "/samples.jsonl --out-dir " + dir +
                  "/splits")
              .exit_code == 0);

  RunResult train = run_cli("--seed 21 train --train " + dir + "/splits/train.jsonl --val " +
                            dir + "/splits/val.jsonl --target mu --epochs 3 --out " + dir +
                            "/model.ckpt --log " + dir + "/log.jsonl");
  CHECK(train.exit_code == 0);
  CHECK(train.out.find("best epoch") != std::string::npos);

  std::vector<ordered_json> log = parse_jsonl(read_text_file(dir + "/log.jsonl"));
  REQUIRE(log.size() == 4);  // three epoch rows plus the summary row
  for (int e = 0; e < 3; ++e) {
    CHECK(log[static_cast<size_t>(e)]["epoch"] == e + 1);
    CHECK(log[static_cast<size_t>(e)]["train_mae"].is_number());
    CHECK(log[static_cast<size_t>(e)]["val_mae"].is_number());
  }
  CHECK(log[3].contains("best_epoch"));
  CHECK(log[3].contains("best_val_mae"));

  PnaModel model = load_checkpoint(dir + "/model.ckpt");
  CHECK(model.config.feature_width == CellCatalog::standard().feature_length());
  CHECK(model.delta > 0.0);

  RunResult predict = run_cli("predict --model " + dir + "/model.ckpt --samples " + dir +
                              "/splits/test.jsonl --out " + dir + "/pred.jsonl");
  CHECK(predict.exit_code == 0);
  std::vector<LabeledSample> test_set = load_samples(dir + "/splits/test.jsonl");
  std::vector<double> expected = model_predict(model, test_set);
  std::vector<ordered_json> pred_rows = parse_jsonl(read_text_file(dir + "/pred.jsonl"));
  REQUIRE(pred_rows.size() == expected.size());
  for (size_t i = 0; i < pred_rows.size(); ++i) {
    CHECK(pred_rows[i]["design"] == test_set[i].design);
    CHECK(pred_rows[i]["prediction"].get<double>() ==
          doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(pred_rows[i]["label"].is_array());
  }

  RunResult eval = run_cli("eval --predictions " + dir + "/pred.jsonl --target mu --out " +
                           dir + "/metrics.json");
  CHECK(eval.exit_code == 0);
  ordered_json metrics = ordered_json::parse(eval.out);
  CHECK(metrics["count"] == static_cast<int>(pred_rows.size()));
  CHECK(metrics["mae"].is_number());
  CHECK(metrics["mean_predictor_mae"].is_number());
  CHECK(read_text_file(dir + "/metrics.json") == eval.out);
}

TEST_CASE("eval selects label components and reports mape as null on zero labels") {
  std::string dir = case_dir("eval");
  std::ostringstream rows;
  ordered_json a, b, c;
  a["design"] = "x";
  a["path_index"] = 0;
  a["prediction"] = 1.0;
  a["label"] = ordered_json::array({10.0, 0.5, 12.0});
  b["design"] = "x";
  b["path_index"] = 1;
  b["prediction"] = 11.0;
  b["label"] = ordered_json::array({10.0, 0.5, 13.0});
  c["design"] = "x";
  c["path_index"] = 2;
  c["prediction"] = 2.0;
  c["label"] = nullptr;  // unlabeled rows are skipped
  rows << a.dump() << "\n" << b.dump() << "\n" << c.dump() << "\n";
  write_text_file(dir + "/pred.jsonl", rows.str());

  RunResult max_eval = run_cli("eval --predictions " + dir + "/pred.jsonl --target max");
  CHECK(max_eval.exit_code == 0);
  ordered_json metrics = ordered_json::parse(max_eval.out);
  CHECK(metrics["count"] == 2);
  // truths 12 and 13 against predictions 1 and 11 -> mae (11 + 2) / 2
  CHECK(metrics["mae"].get<double>() == doctest::Approx(6.5));
  CHECK(metrics["mape"].is_number());

  ordered_json z1, z2;
  z1["design"] = "x";
  z1["path_index"] = 0;
  z1["prediction"] = 1.0;
  z1["label"] = 0.0;
  z2["design"] = "x";
  z2["path_index"] = 1;
  z2["prediction"] = 3.0;
  z2["label"] = 2.0;
  write_text_file(dir + "/zero.jsonl", z1.dump() + "\n" + z2.dump() + "\n");
  RunResult zero_eval = run_cli("eval --predictions " + dir + "/zero.jsonl --target mu");
  CHECK(zero_eval.exit_code == 0);
  ordered_json zero_metrics = ordered_json::parse(zero_eval.out);
  CHECK(zero_metrics["mape"].is_null());
  CHECK(zero_metrics["mae"].get<double>() == doctest::Approx(1.0));

  ordered_json unlabeled;
  unlabeled["design"] = "x";
  unlabeled["path_index"] = 0;
  unlabeled["prediction"] = 1.0;
  unlabeled["label"] = nullptr;
  write_text_file(dir + "/none.jsonl", unlabeled.dump() + "\n");
  RunResult empty_eval = run_cli("eval --predictions " + dir + "/none.jsonl");
  CHECK(empty_eval.exit_code == 1);
  CHECK(empty_eval.err.find("error:") == 0);
}

TEST_CASE("the all command produces every pipeline artifact") {
  std::string dir = case_dir("all");
  REQUIRE(run_cli("--seed 31 synth-bench --name solo --gates 70 --inputs 6 --depth 4 "
                  "--dff-fraction 0.45 --out " +
                  dir + "/solo.json")
              .exit_code == 0);

  RunResult r = run_cli("--seed 31 all --netlist " + dir + "/solo.json --count 20 --hop 1 " +
                        "--instances 10 --epochs 2 --out-dir " + dir + "/run");
  CHECK(r.exit_code == 0);
  ordered_json metrics = ordered_json::parse(r.out);
  CHECK(metrics["mae"].is_number());

  for (const std::string& name :
       {std::string("paths_solo.jsonl"), std::string("labels_solo.jsonl"),
        std::string("samples.jsonl"), std::string("split/train.jsonl"),
        std::string("split/val.jsonl"), std::string("split/test.jsonl"),
        std::string("split/split.json"), std::string("model.ckpt"),
        std::string("train_log.jsonl"), std::string("predictions.jsonl"),
        std::string("metrics.json")}) {
    CAPTURE(name);
    CHECK(fsys::exists(dir + "/run/" + name));
  }

  std::vector<LabeledSample> pooled = load_samples(dir + "/run/samples.jsonl");
  CHECK(pooled.size() == 20);
  for (const auto& s : pooled) REQUIRE(s.label.size() == 3);
  std::vector<LabeledSample> train = load_samples(dir + "/run/split/train.jsonl");
  std::vector<LabeledSample> val = load_samples(dir + "/run/split/val.jsonl");
  std::vector<LabeledSample> test = load_samples(dir + "/run/split/test.jsonl");
  CHECK(train.size() == 16);
  CHECK(val.size() == 2);
  CHECK(test.size() == 2);
  CHECK(ordered_json::parse(read_text_file(dir + "/run/metrics.json")) == metrics);
}

TEST_CASE("failures land on stderr with exit code 1") {
  std::string dir = case_dir("errors");

  RunResult missing = run_cli("convert --netlist " + dir + "/nowhere.v --out " + dir +
                              "/out.json");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("error:") == 0);

  write_text_file(dir + "/bad.v",
                  "module broken(a, y);\n  input a;\n  output y;\n"
                  "  NAND9 g(.A(a), .Y(y));\nendmodule\n");
  RunResult unknown = run_cli("convert --netlist " + dir + "/bad.v --out " + dir +
                              "/out.json");
  CHECK(unknown.exit_code == 1);
  CHECK(unknown.err.find("NAND9") != std::string::npos);

  // Argument errors come from the parser with a nonzero exit of its own.
  RunResult no_out = run_cli("convert --netlist " + dir + "/bad.v");
  CHECK(no_out.exit_code != 0);
}

TEST_CASE("the thread cap does not change results") {
  std::string dir = case_dir("threads");
  std::string in_path = write_two_path_design(dir);
  REQUIRE(run_cli("paths --netlist " + in_path + " --count 2 --out " + dir + "/paths.jsonl")
              .exit_code == 0);
  REQUIRE(run_cli("--seed 9 label --netlist " + in_path + " --paths " + dir +
                  "/paths.jsonl --instances 40 --out " + dir + "/one.jsonl")
              .exit_code == 0);
  REQUIRE(run_cli("--seed 9 --threads 3 label --netlist " + in_path + " --paths " + dir +
                  "/paths.jsonl --instances 40 --out " + dir + "/three.jsonl")
              .exit_code == 0);
  CHECK(read_text_file(dir + "/one.jsonl") == read_text_file(dir + "/three.jsonl"));
}
