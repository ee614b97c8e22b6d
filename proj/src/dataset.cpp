#include "relgraph/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relgraph/netlist.hpp"
#include "relgraph/rng.hpp"

namespace relgraph {

using ordered_json = nlohmann::ordered_json;

namespace {

// Canonical pre-shuffle order, so the split depends only on content and
// seed, never on the order samples arrived in.
void sort_canonical(std::vector<LabeledSample>& samples) {
  std::stable_sort(samples.begin(), samples.end(),
                   [](const LabeledSample& a, const LabeledSample& b) {
                     if (a.design != b.design) return a.design < b.design;
                     return a.path_index < b.path_index;
                   });
}

std::vector<LabeledSample> shuffled(std::vector<LabeledSample> samples, uint64_t seed) {
  sort_canonical(samples);
  SplitMix64 rng(derive_seed(seed, 0x73706c6974ULL));
  shuffle(samples, rng);
  return samples;
}

}  // namespace

SplitResult split_self_referencing(std::vector<LabeledSample> samples, uint64_t seed) {
  size_t n = samples.size();
  if (n < 10)
    throw TooFewSamplesError("self-referencing split needs at least 10 samples, got " +
                             std::to_string(n));
  std::vector<LabeledSample> pool = shuffled(std::move(samples), seed);
  size_t train_end = static_cast<size_t>(0.81 * static_cast<double>(n));
  size_t val_end = static_cast<size_t>(0.91 * static_cast<double>(n));
  SplitResult r;
  r.train.assign(pool.begin(), pool.begin() + static_cast<long>(train_end));
  r.val.assign(pool.begin() + static_cast<long>(train_end),
               pool.begin() + static_cast<long>(val_end));
  r.test.assign(pool.begin() + static_cast<long>(val_end), pool.end());
  return r;
}

SplitResult split_single_design(std::vector<LabeledSample> train_design,
                                std::vector<LabeledSample> test_design, uint64_t seed) {
  size_t n = train_design.size();
  if (n < 2)
    throw TooFewSamplesError("single-design split needs at least 2 training-design samples");
  if (test_design.empty()) throw EmptyDatasetError("test design has no samples");
  std::vector<LabeledSample> pool = shuffled(std::move(train_design), seed);
  size_t train_end = static_cast<size_t>(0.9 * static_cast<double>(n));
  SplitResult r;
  r.train.assign(pool.begin(), pool.begin() + static_cast<long>(train_end));
  r.val.assign(pool.begin() + static_cast<long>(train_end), pool.end());
  sort_canonical(test_design);
  r.test = std::move(test_design);
  return r;
}

SplitResult split_design_dataset(std::vector<LabeledSample> samples,
                                 const std::string& held_out_design, uint64_t seed) {
  std::vector<LabeledSample> held, rest;
  for (auto& s : samples)
    (s.design == held_out_design ? held : rest).push_back(std::move(s));
  if (held.empty()) throw UnknownDesignError(held_out_design);
  SplitResult r = split_single_design(std::move(rest), std::move(held), seed);
  return r;
}

// ---------------------------------------------------------------------------
// JSONL persistence

std::string sample_to_json(const LabeledSample& sample) {
  ordered_json doc;
  doc["design"] = sample.design;
  doc["path_index"] = sample.path_index;
  ordered_json nodes = ordered_json::array();
  for (int i = 0; i < sample.node_count(); ++i) {
    ordered_json jn;
    jn["id"] = sample.nodes[static_cast<size_t>(i)];
    jn["feature_index"] = sample.feature_index[static_cast<size_t>(i)];
    jn["target"] = static_cast<int>(sample.target[static_cast<size_t>(i)]);
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  ordered_json edges = ordered_json::array();
  for (const auto& [u, v] : sample.edges) edges.push_back(ordered_json::array({u, v}));
  doc["edges"] = std::move(edges);
  if (sample.label.empty()) {
    doc["label"] = nullptr;
  } else if (sample.label.size() == 1) {
    doc["label"] = sample.label[0];
  } else {
    doc["label"] = sample.label;
  }
  return doc.dump();
}

LabeledSample sample_from_json(const std::string& line, int line_number) {
  std::string where = "line " + std::to_string(line_number);
  ordered_json doc;
  try {
    doc = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(where, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError(where, "expected an object");
  LabeledSample s;
  if (!doc.contains("design") || !doc["design"].is_string())
    throw SchemaError(where + "/design", "expected a string");
  s.design = doc["design"].get<std::string>();
  if (!doc.contains("path_index") || !doc["path_index"].is_number_integer())
    throw SchemaError(where + "/path_index", "expected an integer");
  s.path_index = doc["path_index"].get<int>();
  if (!doc.contains("nodes") || !doc["nodes"].is_array())
    throw SchemaError(where + "/nodes", "expected an array");
  for (const auto& jn : doc["nodes"]) {
    if (!jn.is_object() || !jn.contains("id") || !jn.contains("feature_index") ||
        !jn.contains("target"))
      throw SchemaError(where + "/nodes", "node needs id, feature_index, target");
    s.nodes.push_back(jn["id"].get<int>());
    s.feature_index.push_back(jn["feature_index"].get<int>());
    s.target.push_back(static_cast<uint8_t>(jn["target"].get<int>() != 0));
  }
  for (size_t i = 1; i < s.nodes.size(); ++i)
    if (s.nodes[i] <= s.nodes[i - 1])
      throw SchemaError(where + "/nodes", "node ids must be strictly ascending");
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw SchemaError(where + "/edges", "expected an array");
  for (const auto& je : doc["edges"]) {
    if (!je.is_array() || je.size() != 2)
      throw SchemaError(where + "/edges", "edge must be a [src, dst] pair");
    int u = je[0].get<int>();
    int v = je[1].get<int>();
    if (s.local_index(u) < 0 || s.local_index(v) < 0)
      throw SchemaError(where + "/edges", "edge endpoint is not a listed node");
    s.edges.emplace_back(u, v);
  }
  if (!doc.contains("label")) throw SchemaError(where + "/label", "missing key");
  const ordered_json& label = doc["label"];
  if (label.is_null()) {
    // unlabeled
  } else if (label.is_number()) {
    s.label.push_back(label.get<double>());
  } else if (label.is_array()) {
    for (const auto& v : label) {
      if (!v.is_number()) throw SchemaError(where + "/label", "expected numbers");
      s.label.push_back(v.get<double>());
    }
  } else {
    throw SchemaError(where + "/label", "expected null, a number, or an array");
  }
  return s;
}

void save_samples(const std::vector<LabeledSample>& samples, const std::string& path) {
  std::ostringstream out;
  for (const auto& s : samples) out << sample_to_json(s) << "\n";
  write_text_file(path, out.str());
}

std::vector<LabeledSample> load_samples(const std::string& path) {
  std::string text = read_text_file(path);
  std::vector<LabeledSample> out;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    out.push_back(sample_from_json(line, line_number));
  }
  return out;
}

}  // namespace relgraph
