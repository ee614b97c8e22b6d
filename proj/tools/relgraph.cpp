// Command-line front end: netlist conversion, synthetic benchmarks, timing
// paths, Monte-Carlo labels, subgraph extraction, dataset splits, training,
// prediction, and evaluation, plus an umbrella pipeline command.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "relgraph/checkpoint.hpp"
#include "relgraph/circuit_graph.hpp"
#include "relgraph/dataset.hpp"
#include "relgraph/delay_model.hpp"
#include "relgraph/metrics.hpp"
#include "relgraph/netlist.hpp"
#include "relgraph/parallel.hpp"
#include "relgraph/pna.hpp"
#include "relgraph/synth.hpp"
#include "relgraph/train.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace relgraph;

namespace {

struct GlobalOptions {
  uint64_t seed = 0;
  int threads = 1;
  std::string catalog_path;
  std::string library_path;
};

CellCatalog load_catalog(const GlobalOptions& g) {
  if (g.catalog_path.empty()) return CellCatalog::standard();
  return parse_catalog(read_text_file(g.catalog_path));
}

DelayLibrary load_library(const GlobalOptions& g) {
  if (g.library_path.empty()) return DelayLibrary::standard();
  return DelayLibrary::parse(read_text_file(g.library_path));
}

// Structural text and canonical JSON are both accepted everywhere; the
// leading character decides which parser runs.
Netlist load_netlist(const std::string& path, const CellCatalog& catalog,
                     double clock_period_ns) {
  std::string text = read_text_file(path);
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_canonical(text, catalog);
  return parse_structural(text, catalog, clock_period_ns);
}

int label_component_index(const std::string& name) {
  if (name == "mu" || name == "value") return 0;
  if (name == "sigma") return 1;
  if (name == "max") return 2;
  throw Error("unknown label component '" + name + "' (use mu, sigma, max, or value)");
}

// ---------------------------------------------------------------------------
// Pipeline pieces shared by the individual subcommands and `all`

struct ExtractedPaths {
  std::vector<TimingPath> paths;
  std::vector<double> arrival;
};

ExtractedPaths run_paths(const CircuitGraph& graph, const CellCatalog& catalog,
                         const ResolvedLibrary& lib, int count, bool dff_only) {
  ExtractedPaths out;
  out.arrival = compute_arrivals(graph, catalog, lib, nullptr);
  PathExtractOptions opt;
  opt.count = count;
  opt.dff_endpoints_only = dff_only;
  out.paths = extract_timing_paths(graph, catalog, out.arrival, opt);
  if (static_cast<int>(out.paths.size()) < count)
    std::cerr << "note: only " << out.paths.size() << " of " << count
              << " requested paths exist\n";
  return out;
}

std::string paths_to_jsonl(const Netlist& netlist, const CircuitGraph& graph,
                           const std::vector<TimingPath>& paths) {
  std::ostringstream out;
  double period_ps = netlist.clock_period_ns * 1000.0;
  for (size_t i = 0; i < paths.size(); ++i) {
    const TimingPath& p = paths[i];
    ordered_json doc;
    doc["design"] = netlist.name;
    doc["path_index"] = static_cast<int>(i);
    doc["start"] = p.start;
    doc["end"] = p.end;
    doc["start_name"] = graph.nodes[static_cast<size_t>(p.start)].name;
    doc["end_name"] = graph.nodes[static_cast<size_t>(p.end)].name;
    ordered_json gates = ordered_json::array();
    ordered_json gate_names = ordered_json::array();
    for (int v : p.gates) {
      gates.push_back(v);
      gate_names.push_back(graph.nodes[static_cast<size_t>(v)].name);
    }
    doc["gates"] = std::move(gates);
    doc["gate_names"] = std::move(gate_names);
    doc["baseline_delay_ps"] = p.baseline_delay_ps;
    doc["slack_ps"] = period_ps - p.baseline_delay_ps;
    out << doc.dump() << "\n";
  }
  return out.str();
}

std::vector<TimingPath> paths_from_jsonl(const std::string& text, const std::string& design) {
  std::vector<TimingPath> out;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::string where = "line " + std::to_string(line_number);
    ordered_json doc;
    try {
      doc = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(where, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.contains("design") || !doc["design"].is_string())
      throw SchemaError(where + "/design", "expected a string");
    if (doc["design"].get<std::string>() != design) continue;
    TimingPath p;
    p.start = doc.at("start").get<int>();
    p.end = doc.at("end").get<int>();
    for (const auto& v : doc.at("gates")) p.gates.push_back(v.get<int>());
    p.baseline_delay_ps = doc.at("baseline_delay_ps").get<double>();
    out.push_back(std::move(p));
  }
  return out;
}

struct LabelOptions {
  std::string target = "variation";  // or "aging"
  int instances = 100;
  std::string mode = "worst";  // or "random"
  double scale = 1.0;
  uint64_t seed = 0;
};

// label vectors per path: [mu, sigma, max] for variation, [value] for aging
std::vector<std::vector<double>> run_labels(const Netlist& netlist, const CellCatalog& catalog,
                                            const DelayLibrary& library,
                                            const CircuitGraph& graph,
                                            const std::vector<TimingPath>& paths,
                                            const LabelOptions& opt) {
  std::vector<std::vector<double>> out;
  if (opt.target == "variation") {
    auto labels =
        label_paths_process_variation(graph, catalog, netlist, library, paths, opt.instances,
                                      opt.seed);
    for (const auto& l : labels) out.push_back({l.mu, l.sigma, l.max});
  } else if (opt.target == "aging") {
    AgingParams params;
    params.stress_mode = opt.mode == "random" ? StressMode::Random : StressMode::WorstCase;
    params.global_scale = opt.scale;
    auto labels = label_paths_aging(graph, catalog, netlist, library, paths, params, opt.seed);
    for (double l : labels) out.push_back({l});
  } else {
    throw Error("unknown label target '" + opt.target + "' (use variation or aging)");
  }
  return out;
}

std::string labels_to_jsonl(const std::string& design,
                            const std::vector<std::vector<double>>& labels) {
  std::ostringstream out;
  for (size_t i = 0; i < labels.size(); ++i) {
    ordered_json doc;
    doc["design"] = design;
    doc["path_index"] = static_cast<int>(i);
    if (labels[i].size() == 1)
      doc["label"] = labels[i][0];
    else
      doc["label"] = labels[i];
    out << doc.dump() << "\n";
  }
  return out.str();
}

std::map<std::pair<std::string, int>, std::vector<double>> labels_from_jsonl(
    const std::string& text) {
  std::map<std::pair<std::string, int>, std::vector<double>> out;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::string where = "line " + std::to_string(line_number);
    ordered_json doc;
    try {
      doc = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(where, std::string("invalid JSON: ") + e.what());
    }
    std::vector<double> label;
    const auto& jl = doc.at("label");
    if (jl.is_number()) {
      label.push_back(jl.get<double>());
    } else if (jl.is_array()) {
      for (const auto& v : jl) label.push_back(v.get<double>());
    } else {
      throw SchemaError(where + "/label", "expected a number or an array");
    }
    out[{doc.at("design").get<std::string>(), doc.at("path_index").get<int>()}] =
        std::move(label);
  }
  return out;
}

std::vector<LabeledSample> run_extract(const Netlist& netlist, const CellCatalog& catalog,
                                       const CircuitGraph& graph,
                                       const std::vector<TimingPath>& paths, int hop,
                                       const std::vector<std::vector<double>>* labels) {
  if (labels && labels->size() != paths.size())
    throw LengthMismatchError("label count does not match path count");
  std::vector<LabeledSample> samples;
  for (size_t i = 0; i < paths.size(); ++i) {
    LabeledSample s = extract_enclosing_subgraph(graph, catalog, paths[i], hop);
    s.design = netlist.name;
    s.path_index = static_cast<int>(i);
    if (labels) s.label = (*labels)[i];
    samples.push_back(std::move(s));
  }
  return samples;
}

struct TrainArtifacts {
  PnaModel model;
  TrainReport report;
};

TrainArtifacts run_train(const std::vector<LabeledSample>& train_set,
                         const std::vector<LabeledSample>& val_set, int component,
                         const CellCatalog& catalog, const ModelConfig& base_config,
                         const TrainConfig& tc) {
  ModelConfig config = base_config;
  config.feature_width = catalog.feature_length();
  double delta = compute_delta(train_set);
  TrainArtifacts art{PnaModel::init(config, delta, tc.seed), TrainReport{}};
  art.report = train_model(art.model, train_set, val_set, component, tc);
  return art;
}

std::string train_log_to_jsonl(const TrainReport& report) {
  std::ostringstream out;
  for (const auto& rec : report.history) {
    ordered_json doc;
    doc["epoch"] = rec.epoch;
    doc["train_mae"] = rec.train_mae;
    doc["val_mae"] = rec.val_mae;
    out << doc.dump() << "\n";
  }
  ordered_json best;
  best["best_epoch"] = report.best_epoch;
  best["best_val_mae"] = report.best_val_mae;
  out << best.dump() << "\n";
  return out.str();
}

std::string predictions_to_jsonl(const std::vector<LabeledSample>& samples,
                                 const std::vector<double>& predictions) {
  std::ostringstream out;
  for (size_t i = 0; i < samples.size(); ++i) {
    ordered_json doc;
    doc["design"] = samples[i].design;
    doc["path_index"] = samples[i].path_index;
    doc["prediction"] = predictions[i];
    if (samples[i].label.empty())
      doc["label"] = nullptr;
    else if (samples[i].label.size() == 1)
      doc["label"] = samples[i].label[0];
    else
      doc["label"] = samples[i].label;
    out << doc.dump() << "\n";
  }
  return out.str();
}

ordered_json eval_predictions_text(const std::string& text, int component) {
  std::vector<double> pred, actual;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    ordered_json doc;
    try {
      doc = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("line " + std::to_string(line_number),
                        std::string("invalid JSON: ") + e.what());
    }
    if (!doc.contains("prediction")) continue;
    const auto& jl = doc.at("label");
    double truth;
    if (jl.is_number() && component == 0) {
      truth = jl.get<double>();
    } else if (jl.is_array() && component < static_cast<int>(jl.size())) {
      truth = jl[static_cast<size_t>(component)].get<double>();
    } else {
      continue;  // unlabeled rows do not participate
    }
    pred.push_back(doc.at("prediction").get<double>());
    actual.push_back(truth);
  }
  if (pred.empty()) throw EmptyDatasetError("no labeled predictions to evaluate");
  ordered_json result;
  result["count"] = static_cast<int>(pred.size());
  result["mae"] = mae(pred, actual);
  try {
    result["mape"] = mape(pred, actual);
  } catch (const ZeroTrueValueError&) {
    result["mape"] = nullptr;
  }
  double mean = 0.0;
  for (double a : actual) mean += a;
  mean /= static_cast<double>(actual.size());
  std::vector<double> constant(actual.size(), mean);
  result["mean_predictor_mae"] = mae(constant, actual);
  return result;
}

void write_split_dir(const SplitResult& split, const std::string& scenario, uint64_t seed,
                     const std::string& out_dir) {
  fs::create_directories(out_dir);
  save_samples(split.train, out_dir + "/train.jsonl");
  save_samples(split.val, out_dir + "/val.jsonl");
  save_samples(split.test, out_dir + "/test.jsonl");
  ordered_json manifest;
  manifest["scenario"] = scenario;
  manifest["seed"] = seed;
  manifest["train"] = static_cast<int>(split.train.size());
  manifest["val"] = static_cast<int>(split.val.size());
  manifest["test"] = static_cast<int>(split.test.size());
  write_text_file(out_dir + "/split.json", manifest.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-delay degradation toolkit: netlists to timing subgraphs to a trained "
               "graph regressor"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Global random seed")->envname("RELGRAPH_SEED");
  app.add_option("--threads", g.threads, "Worker thread cap (results are identical)");
  app.add_option("--catalog", g.catalog_path, "Cell catalog JSON (default: built-in)");
  app.add_option("--library", g.library_path, "Delay library JSON (default: built-in)");

  // ---- convert
  auto* cmd_convert = app.add_subcommand("convert", "Parse a netlist and write canonical JSON");
  std::string convert_in, convert_out;
  double convert_clock = 1.0;
  cmd_convert->add_option("--netlist", convert_in, "Input netlist (structural or canonical)")
      ->required();
  cmd_convert->add_option("--clock", convert_clock, "Clock period in ns for structural inputs");
  cmd_convert->add_option("--out", convert_out, "Output path")->required();

  // ---- synth-bench
  auto* cmd_synth = app.add_subcommand("synth-bench", "Generate a synthetic benchmark design");
  SynthConfig synth_cfg;
  std::string synth_out;
  cmd_synth->add_option("--name", synth_cfg.name, "Design name");
  cmd_synth->add_option("--gates", synth_cfg.n_gates, "Total gate count");
  cmd_synth->add_option("--dff-fraction", synth_cfg.dff_fraction, "Flip-flop share of gates");
  cmd_synth->add_option("--inputs", synth_cfg.n_inputs, "Primary input count");
  cmd_synth->add_option("--depth", synth_cfg.depth, "Combinational depth");
  cmd_synth->add_option("--clock", synth_cfg.clock_period_ns, "Clock period in ns");
  cmd_synth->add_option("--out", synth_out, "Output canonical JSON")->required();

  // ---- paths
  auto* cmd_paths = app.add_subcommand("paths", "Extract the worst timing paths");
  std::string paths_netlist, paths_out;
  int paths_count = 1;
  bool paths_dff_only = false;
  double paths_clock = 1.0;
  cmd_paths->add_option("--netlist", paths_netlist, "Netlist file")->required();
  cmd_paths->add_option("--count", paths_count, "How many paths");
  cmd_paths->add_flag("--dff-only", paths_dff_only, "Only flip-flop end points");
  cmd_paths->add_option("--clock", paths_clock, "Clock period in ns for structural inputs");
  cmd_paths->add_option("--out", paths_out, "Output JSONL")->required();

  // ---- label
  auto* cmd_label = app.add_subcommand("label", "Monte-Carlo or aging labels for paths");
  std::string label_netlist, label_paths_file, label_out;
  double label_clock = 1.0;
  LabelOptions label_opt;
  cmd_label->add_option("--netlist", label_netlist, "Netlist file")->required();
  cmd_label->add_option("--paths", label_paths_file, "Paths JSONL from `paths`")->required();
  cmd_label->add_option("--target", label_opt.target, "variation or aging");
  cmd_label->add_option("--instances", label_opt.instances, "Monte-Carlo instance count");
  cmd_label->add_option("--mode", label_opt.mode, "Aging stress: worst or random");
  cmd_label->add_option("--scale", label_opt.scale, "Aging global scale");
  cmd_label->add_option("--clock", label_clock, "Clock period in ns for structural inputs");
  cmd_label->add_option("--out", label_out, "Output JSONL")->required();

  // ---- extract
  auto* cmd_extract = app.add_subcommand("extract", "Enclosing subgraphs for paths");
  std::string ex_netlist, ex_paths, ex_labels, ex_out;
  int ex_hop = 1;
  double ex_clock = 1.0;
  cmd_extract->add_option("--netlist", ex_netlist, "Netlist file")->required();
  cmd_extract->add_option("--paths", ex_paths, "Paths JSONL")->required();
  cmd_extract->add_option("--labels", ex_labels, "Labels JSONL (optional)");
  cmd_extract->add_option("--hop", ex_hop, "Neighborhood radius");
  cmd_extract->add_option("--clock", ex_clock, "Clock period in ns for structural inputs");
  cmd_extract->add_option("--out", ex_out, "Output samples JSONL")->required();

  // ---- split
  auto* cmd_split = app.add_subcommand("split", "Split samples into train/val/test");
  std::string sp_samples, sp_scenario = "self", sp_test_design, sp_test_samples, sp_out_dir;
  cmd_split->add_option("--samples", sp_samples, "Samples JSONL")->required();
  cmd_split->add_option("--scenario", sp_scenario, "self, single, or dataset");
  cmd_split->add_option("--test-design", sp_test_design, "Held-out design (dataset scenario)");
  cmd_split->add_option("--test-samples", sp_test_samples,
                        "Separate test-design samples JSONL (single scenario)");
  cmd_split->add_option("--out-dir", sp_out_dir, "Output directory")->required();

  // ---- train
  auto* cmd_train = app.add_subcommand("train", "Train the regressor");
  std::string tr_train, tr_val, tr_component = "mu", tr_out, tr_log;
  TrainConfig tr_cfg;
  ModelConfig tr_model_cfg;
  cmd_train->add_option("--train", tr_train, "Training samples JSONL")->required();
  cmd_train->add_option("--val", tr_val, "Validation samples JSONL")->required();
  cmd_train->add_option("--target", tr_component, "Label component: mu, sigma, max, value");
  cmd_train->add_option("--epochs", tr_cfg.epochs, "Epoch budget");
  cmd_train->add_option("--lr", tr_cfg.lr, "Adam learning rate");
  cmd_train->add_option("--batch-size", tr_cfg.batch_size, "Batch size");
  bool tr_mean_readout = false, tr_no_mask = false;
  cmd_train->add_flag("--mean-readout", tr_mean_readout, "Mean readout instead of sum");
  cmd_train->add_flag("--no-target-mask", tr_no_mask, "Drop the path-membership input column");
  cmd_train->add_option("--out", tr_out, "Checkpoint path")->required();
  cmd_train->add_option("--log", tr_log, "Per-epoch JSONL log path");

  // ---- predict
  auto* cmd_predict = app.add_subcommand("predict", "Run a checkpoint over samples");
  std::string pr_model, pr_samples, pr_out;
  cmd_predict->add_option("--model", pr_model, "Checkpoint from `train`")->required();
  cmd_predict->add_option("--samples", pr_samples, "Samples JSONL")->required();
  cmd_predict->add_option("--out", pr_out, "Predictions JSONL")->required();

  // ---- eval
  auto* cmd_eval = app.add_subcommand("eval", "Score predictions against labels");
  std::string ev_predictions, ev_component = "mu", ev_out;
  cmd_eval->add_option("--predictions", ev_predictions, "Predictions JSONL")->required();
  cmd_eval->add_option("--target", ev_component, "Label component: mu, sigma, max, value");
  cmd_eval->add_option("--out", ev_out, "Metrics JSON path (default: stdout only)");

  // ---- all
  auto* cmd_all = app.add_subcommand("all", "Full pipeline over one or more netlists");
  std::vector<std::string> all_netlists;
  std::string all_scenario = "self", all_test_design, all_out_dir, all_component = "mu";
  int all_count = 1000, all_hop = 1;
  double all_clock = 1.0;
  LabelOptions all_label_opt;
  TrainConfig all_train_cfg;
  cmd_all->add_option("--netlist", all_netlists, "Netlist file (repeatable)")
      ->required()
      ->take_all();
  cmd_all->add_option("--scenario", all_scenario, "self, single, or dataset");
  cmd_all->add_option("--test-design", all_test_design, "Held-out design name");
  cmd_all->add_option("--count", all_count, "Paths per design");
  cmd_all->add_option("--hop", all_hop, "Neighborhood radius");
  cmd_all->add_option("--clock", all_clock, "Clock period in ns for structural inputs");
  cmd_all->add_option("--target", all_label_opt.target, "variation or aging");
  cmd_all->add_option("--instances", all_label_opt.instances, "Monte-Carlo instances");
  cmd_all->add_option("--mode", all_label_opt.mode, "Aging stress: worst or random");
  cmd_all->add_option("--component", all_component, "Trained label component");
  cmd_all->add_option("--epochs", all_train_cfg.epochs, "Epoch budget");
  cmd_all->add_option("--lr", all_train_cfg.lr, "Adam learning rate");
  cmd_all->add_option("--batch-size", all_train_cfg.batch_size, "Batch size");
  cmd_all->add_option("--out-dir", all_out_dir, "Artifact directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    set_thread_count(g.threads);
    CellCatalog catalog = load_catalog(g);

    if (*cmd_convert) {
      Netlist n = load_netlist(convert_in, catalog, convert_clock);
      write_text_file(convert_out, write_canonical(n, catalog));
      std::cout << "wrote " << convert_out << " (" << n.gates.size() << " gates)\n";
    }

    if (*cmd_synth) {
      synth_cfg.seed = g.seed;
      Netlist n = generate_synthetic_netlist(synth_cfg, catalog);
      write_text_file(synth_out, write_canonical(n, catalog));
      std::cout << "wrote " << synth_out << " (" << n.gates.size() << " gates, "
                << n.primary_outputs.size() << " outputs)\n";
    }

    if (*cmd_paths) {
      DelayLibrary library = load_library(g);
      Netlist n = load_netlist(paths_netlist, catalog, paths_clock);
      CircuitGraph graph = build_graph(n, catalog);
      ResolvedLibrary lib(library, catalog);
      ExtractedPaths ep = run_paths(graph, catalog, lib, paths_count, paths_dff_only);
      write_text_file(paths_out, paths_to_jsonl(n, graph, ep.paths));
      std::cout << "wrote " << paths_out << " (" << ep.paths.size() << " paths)\n";
    }

    if (*cmd_label) {
      DelayLibrary library = load_library(g);
      Netlist n = load_netlist(label_netlist, catalog, label_clock);
      CircuitGraph graph = build_graph(n, catalog);
      std::vector<TimingPath> paths =
          paths_from_jsonl(read_text_file(label_paths_file), n.name);
      label_opt.seed = g.seed;
      auto labels = run_labels(n, catalog, library, graph, paths, label_opt);
      write_text_file(label_out, labels_to_jsonl(n.name, labels));
      std::cout << "wrote " << label_out << " (" << labels.size() << " labels)\n";
    }

    if (*cmd_extract) {
      Netlist n = load_netlist(ex_netlist, catalog, ex_clock);
      CircuitGraph graph = build_graph(n, catalog);
      std::vector<TimingPath> paths = paths_from_jsonl(read_text_file(ex_paths), n.name);
      std::vector<std::vector<double>> labels;
      std::vector<std::vector<double>>* labels_ptr = nullptr;
      if (!ex_labels.empty()) {
        auto by_key = labels_from_jsonl(read_text_file(ex_labels));
        for (size_t i = 0; i < paths.size(); ++i) {
          auto it = by_key.find({n.name, static_cast<int>(i)});
          if (it == by_key.end())
            throw Error("missing label for path " + std::to_string(i) + " of " + n.name);
          labels.push_back(it->second);
        }
        labels_ptr = &labels;
      }
      auto samples = run_extract(n, catalog, graph, paths, ex_hop, labels_ptr);
      save_samples(samples, ex_out);
      std::cout << "wrote " << ex_out << " (" << samples.size() << " samples)\n";
    }

    if (*cmd_split) {
      auto samples = load_samples(sp_samples);
      SplitResult split;
      if (sp_scenario == "self") {
        split = split_self_referencing(std::move(samples), g.seed);
      } else if (sp_scenario == "single") {
        if (sp_test_samples.empty())
          throw Error("single scenario needs --test-samples");
        split = split_single_design(std::move(samples), load_samples(sp_test_samples), g.seed);
      } else if (sp_scenario == "dataset") {
        if (sp_test_design.empty()) throw Error("dataset scenario needs --test-design");
        split = split_design_dataset(std::move(samples), sp_test_design, g.seed);
      } else {
        throw Error("unknown scenario '" + sp_scenario + "'");
      }
      write_split_dir(split, sp_scenario, g.seed, sp_out_dir);
      std::cout << "wrote " << sp_out_dir << " (train " << split.train.size() << ", val "
                << split.val.size() << ", test " << split.test.size() << ")\n";
    }

    if (*cmd_train) {
      auto train_set = load_samples(tr_train);
      auto val_set = load_samples(tr_val);
      tr_cfg.seed = g.seed;
      tr_model_cfg.mean_readout = tr_mean_readout;
      tr_model_cfg.use_target_mask = !tr_no_mask;
      int component = label_component_index(tr_component);
      TrainArtifacts art =
          run_train(train_set, val_set, component, catalog, tr_model_cfg, tr_cfg);
      save_checkpoint(art.model, tr_out);
      if (!tr_log.empty()) write_text_file(tr_log, train_log_to_jsonl(art.report));
      std::cout << "wrote " << tr_out << " (best epoch " << art.report.best_epoch
                << ", val MAE " << art.report.best_val_mae << ")\n";
    }

    if (*cmd_predict) {
      PnaModel model = load_checkpoint(pr_model);
      auto samples = load_samples(pr_samples);
      auto predictions = model_predict(model, samples);
      write_text_file(pr_out, predictions_to_jsonl(samples, predictions));
      std::cout << "wrote " << pr_out << " (" << predictions.size() << " predictions)\n";
    }

    if (*cmd_eval) {
      ordered_json metrics = eval_predictions_text(read_text_file(ev_predictions),
                                                   label_component_index(ev_component));
      std::string text = metrics.dump(2) + "\n";
      if (!ev_out.empty()) write_text_file(ev_out, text);
      std::cout << text;
    }

    if (*cmd_all) {
      DelayLibrary library = load_library(g);
      fs::create_directories(all_out_dir);
      all_label_opt.seed = g.seed;
      all_train_cfg.seed = g.seed;

      std::vector<LabeledSample> pooled;
      std::vector<std::string> design_names;
      for (const std::string& path : all_netlists) {
        Netlist n = load_netlist(path, catalog, all_clock);
        design_names.push_back(n.name);
        CircuitGraph graph = build_graph(n, catalog);
        ResolvedLibrary lib(library, catalog);
        ExtractedPaths ep = run_paths(graph, catalog, lib, all_count, false);
        write_text_file(all_out_dir + "/paths_" + n.name + ".jsonl",
                        paths_to_jsonl(n, graph, ep.paths));
        auto labels = run_labels(n, catalog, library, graph, ep.paths, all_label_opt);
        write_text_file(all_out_dir + "/labels_" + n.name + ".jsonl",
                        labels_to_jsonl(n.name, labels));
        auto samples = run_extract(n, catalog, graph, ep.paths, all_hop, &labels);
        for (auto& s : samples) pooled.push_back(std::move(s));
      }
      save_samples(pooled, all_out_dir + "/samples.jsonl");

      SplitResult split;
      if (all_scenario == "self") {
        if (design_names.size() != 1)
          throw Error("self scenario expects exactly one netlist");
        split = split_self_referencing(std::move(pooled), g.seed);
      } else if (all_scenario == "single") {
        if (design_names.size() != 2)
          throw Error("single scenario expects exactly two netlists (train, test)");
        std::vector<LabeledSample> train_pool, test_pool;
        for (auto& s : pooled)
          (s.design == design_names[0] ? train_pool : test_pool).push_back(std::move(s));
        split = split_single_design(std::move(train_pool), std::move(test_pool), g.seed);
      } else if (all_scenario == "dataset") {
        if (all_test_design.empty()) throw Error("dataset scenario needs --test-design");
        split = split_design_dataset(std::move(pooled), all_test_design, g.seed);
      } else {
        throw Error("unknown scenario '" + all_scenario + "'");
      }
      write_split_dir(split, all_scenario, g.seed, all_out_dir + "/split");

      int component = label_component_index(all_component);
      ModelConfig model_cfg;
      TrainArtifacts art =
          run_train(split.train, split.val, component, catalog, model_cfg, all_train_cfg);
      save_checkpoint(art.model, all_out_dir + "/model.ckpt");
      write_text_file(all_out_dir + "/train_log.jsonl", train_log_to_jsonl(art.report));

      auto predictions = model_predict(art.model, split.test);
      write_text_file(all_out_dir + "/predictions.jsonl",
                      predictions_to_jsonl(split.test, predictions));
      ordered_json metrics = eval_predictions_text(
          read_text_file(all_out_dir + "/predictions.jsonl"), component);
      write_text_file(all_out_dir + "/metrics.json", metrics.dump(2) + "\n");
      std::cout << metrics.dump(2) << "\n";
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
