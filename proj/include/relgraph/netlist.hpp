#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "relgraph/errors.hpp"

namespace relgraph {

// One cell kind the toolkit knows how to instantiate. `function` is a
// Boolean-function tag ("AND", "NAND", ...) shared by kinds that compute the
// same function at different widths; feature encoding groups by it.
struct CellKind {
  std::string name;
  std::string function;
  int input_pin_count = 1;
  bool is_sequential = false;

  bool operator==(const CellKind&) const = default;
};

// Ordered collection of cell kinds. The order is meaningful: it fixes gate
// kind indices and the feature-column layout, so a catalog must not be
// reordered once data has been produced against it.
class CellCatalog {
 public:
  CellCatalog() = default;
  explicit CellCatalog(std::vector<CellKind> kinds);

  // The built-in twelve-kind catalog used by the bundled delay library.
  static CellCatalog standard();

  const std::vector<CellKind>& kinds() const { return kinds_; }
  const CellKind& kind(int index) const { return kinds_.at(static_cast<size_t>(index)); }
  int size() const { return static_cast<int>(kinds_.size()); }

  // Index of the kind with this name, or -1 if absent.
  int index_of(const std::string& name) const;

  // Distinct function tags, in order of first appearance in the catalog.
  const std::vector<std::string>& functions() const { return functions_; }
  int function_count() const { return static_cast<int>(functions_.size()); }
  int function_index(const std::string& function) const;

  // One-hot feature length: one column per distinct function tag, plus one
  // for primary inputs and one for primary outputs.
  int feature_length() const { return function_count() + 2; }

 private:
  std::vector<CellKind> kinds_;
  std::unordered_map<std::string, int> by_name_;
  std::vector<std::string> functions_;
  std::unordered_map<std::string, int> function_by_name_;
};

// A gate instance. `kind` indexes into the catalog the netlist was parsed
// against. `inputs` is ordered by pin (A, B, C, ... or D for flip-flops).
struct GateInstance {
  std::string name;
  int kind = -1;
  std::vector<std::string> inputs;
  std::string output;

  bool operator==(const GateInstance&) const = default;
};

struct Netlist {
  std::string name;
  double clock_period_ns = 1.0;
  std::vector<std::string> primary_inputs;
  std::vector<std::string> primary_outputs;
  std::vector<GateInstance> gates;

  bool operator==(const Netlist&) const = default;
};

// Semantic checks shared by both parsers and the synthetic generator:
// unknown kinds, duplicate instance names, arity, multiple drivers, undriven
// nets, and combinational cycles (a cycle is fine if a flip-flop breaks it).
void validate_netlist(const Netlist& netlist, const CellCatalog& catalog);

// Parses the structural gate-level subset:
//   module m(a, b, y);
//     input a, b;
//     output y;
//     wire w;
//     INV g1(.A(a), .Y(w));
//     NAND2 g2(.A(w), .B(b), .Y(y));
//   endmodule
// Inputs use pins A, B, C, ...; outputs use Y; flip-flops use D and Q.
// The format carries no clock period, so the caller supplies one.
Netlist parse_structural(const std::string& text, const CellCatalog& catalog,
                         double clock_period_ns = 1.0);

// Canonical JSON document form. write_canonical emits keys in a fixed order
// with fixed indentation so equal netlists serialize to identical bytes.
Netlist parse_canonical(const std::string& text, const CellCatalog& catalog);
std::string write_canonical(const Netlist& netlist, const CellCatalog& catalog);

// Catalog JSON I/O, for user-extended cell sets.
CellCatalog parse_catalog(const std::string& text);
std::string write_catalog(const CellCatalog& catalog);

// Small file helpers used across the toolkit.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace relgraph
