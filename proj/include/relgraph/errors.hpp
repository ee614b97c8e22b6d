#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace relgraph {

// Base class for all toolkit errors. Everything thrown on purpose derives
// from this so callers can catch one type at the CLI boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural netlist text could not be tokenized or parsed.
struct SyntaxError : Error {
  int line = 0;
  int column = 0;
  SyntaxError(int line_, int column_, const std::string& what_)
      : Error("syntax error at line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ": " + what_),
        line(line_),
        column(column_) {}
};

// A JSON document did not match the expected shape. `path` points at the
// offending element, e.g. "/gates/3/inputs".
struct SchemaError : Error {
  std::string path;
  SchemaError(const std::string& path_, const std::string& what_)
      : Error("schema error at " + path_ + ": " + what_), path(path_) {}
};

// A gate references a cell kind that the active catalog (or delay library)
// does not define.
struct UnknownCellError : Error {
  std::string cell;
  explicit UnknownCellError(const std::string& cell_, const std::string& where = "")
      : Error("unknown cell kind '" + cell_ + "'" + (where.empty() ? "" : " " + where)),
        cell(cell_) {}
};

// Two sources drive the same net.
struct MultipleDriversError : Error {
  std::string net;
  explicit MultipleDriversError(const std::string& net_)
      : Error("net '" + net_ + "' has multiple drivers"), net(net_) {}
};

// A net is consumed (gate input or primary output) but nothing drives it.
struct UndrivenNetError : Error {
  std::string net;
  explicit UndrivenNetError(const std::string& net_)
      : Error("net '" + net_ + "' is used but never driven"), net(net_) {}
};

// The combinational part of the design contains a cycle that no flip-flop
// breaks. `cycle` lists the gate instance names on the loop.
struct CombinationalCycleError : Error {
  std::vector<std::string> cycle;
  explicit CombinationalCycleError(std::vector<std::string> cycle_)
      : Error(format_cycle(cycle_)), cycle(std::move(cycle_)) {}

 private:
  static std::string format_cycle(const std::vector<std::string>& c) {
    std::string s = "combinational cycle:";
    for (const auto& g : c) s += " " + g;
    return s;
  }
};

// Path extraction found no eligible timing end points.
struct NoEndpointsError : Error {
  using Error::Error;
};

// Degradation is undefined for a non-positive baseline delay.
struct NonpositiveBaselineError : Error {
  using Error::Error;
};

// Tensor operands have incompatible shapes.
struct ShapeMismatchError : Error {
  using Error::Error;
};

// Two sequences that must be index-aligned differ in length.
struct LengthMismatchError : Error {
  using Error::Error;
};

// MAPE is undefined when a true value is zero.
struct ZeroTrueValueError : Error {
  using Error::Error;
};

// A split or training set ended up empty.
struct EmptyDatasetError : Error {
  using Error::Error;
};

// Too few samples to produce non-empty splits.
struct TooFewSamplesError : Error {
  using Error::Error;
};

// A named design is absent from the sample collection.
struct UnknownDesignError : Error {
  std::string design;
  explicit UnknownDesignError(const std::string& design_)
      : Error("design '" + design_ + "' not present in the sample set"), design(design_) {}
};

// Degree-scaler normalization needs at least one node with positive in-degree.
struct NoPositiveDegreeError : Error {
  using Error::Error;
};

// File could not be opened, read, or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace relgraph
