#include "relgraph/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace relgraph {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// CellCatalog

CellCatalog::CellCatalog(std::vector<CellKind> kinds) : kinds_(std::move(kinds)) {
  for (size_t i = 0; i < kinds_.size(); ++i) {
    const CellKind& k = kinds_[i];
    if (k.name.empty()) throw Error("catalog kind " + std::to_string(i) + " has an empty name");
    if (k.function.empty())
      throw Error("catalog kind '" + k.name + "' has an empty function tag");
    if (k.input_pin_count < 1)
      throw Error("catalog kind '" + k.name + "' must have at least one input pin");
    if (k.is_sequential && k.input_pin_count != 1)
      throw Error("sequential kind '" + k.name + "' must have exactly one data input pin");
    if (!by_name_.emplace(k.name, static_cast<int>(i)).second)
      throw Error("catalog defines cell kind '" + k.name + "' twice");
    if (function_by_name_.emplace(k.function, static_cast<int>(functions_.size())).second)
      functions_.push_back(k.function);
  }
}

CellCatalog CellCatalog::standard() {
  return CellCatalog({
      {"INV", "INV", 1, false},
      {"BUF", "BUF", 1, false},
      {"NAND2", "NAND", 2, false},
      {"NOR2", "NOR", 2, false},
      {"AND2", "AND", 2, false},
      {"OR2", "OR", 2, false},
      {"XOR2", "XOR", 2, false},
      {"XNOR2", "XNOR", 2, false},
      {"AOI21", "AOI", 3, false},
      {"OAI21", "OAI", 3, false},
      {"AND3", "AND", 3, false},
      {"DFF", "DFF", 1, true},
  });
}

int CellCatalog::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

int CellCatalog::function_index(const std::string& function) const {
  auto it = function_by_name_.find(function);
  return it == function_by_name_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// Validation

void validate_netlist(const Netlist& netlist, const CellCatalog& catalog) {
  // net -> description of its driver, for multiple-driver reporting.
  std::unordered_map<std::string, int> driver_count;
  for (const auto& pi : netlist.primary_inputs) {
    if (++driver_count[pi] > 1) throw MultipleDriversError(pi);
  }

  std::unordered_map<std::string, int> instance_seen;
  for (const auto& gate : netlist.gates) {
    if (gate.kind < 0 || gate.kind >= catalog.size())
      throw UnknownCellError("#" + std::to_string(gate.kind),
                             "for gate '" + gate.name + "'");
    const CellKind& kind = catalog.kind(gate.kind);
    if (++instance_seen[gate.name] > 1)
      throw Error("gate instance '" + gate.name + "' is declared twice");
    if (static_cast<int>(gate.inputs.size()) != kind.input_pin_count)
      throw Error("gate '" + gate.name + "' of kind '" + kind.name + "' has " +
                  std::to_string(gate.inputs.size()) + " inputs, expected " +
                  std::to_string(kind.input_pin_count));
    if (gate.output.empty()) throw Error("gate '" + gate.name + "' drives no net");
    if (++driver_count[gate.output] > 1) throw MultipleDriversError(gate.output);
  }

  for (const auto& gate : netlist.gates)
    for (const auto& net : gate.inputs)
      if (!driver_count.count(net)) throw UndrivenNetError(net);
  for (const auto& po : netlist.primary_outputs)
    if (!driver_count.count(po)) throw UndrivenNetError(po);

  // Combinational cycle check: edges between non-sequential gates only.
  // Flip-flop boundaries legitimately close feedback loops.
  std::unordered_map<std::string, int> comb_driver;  // net -> comb gate index
  std::vector<int> comb;                             // indices of comb gates
  for (size_t i = 0; i < netlist.gates.size(); ++i) {
    if (!catalog.kind(netlist.gates[i].kind).is_sequential) {
      comb_driver[netlist.gates[i].output] = static_cast<int>(i);
      comb.push_back(static_cast<int>(i));
    }
  }
  std::unordered_map<int, std::vector<int>> succ;
  std::unordered_map<int, int> indeg;
  for (int i : comb) indeg[i] = 0;
  for (int i : comb) {
    for (const auto& net : netlist.gates[static_cast<size_t>(i)].inputs) {
      auto it = comb_driver.find(net);
      if (it != comb_driver.end()) {
        succ[it->second].push_back(i);
        ++indeg[i];
      }
    }
  }
  std::queue<int> ready;
  for (int i : comb)
    if (indeg[i] == 0) ready.push(i);
  int processed = 0;
  while (!ready.empty()) {
    int u = ready.front();
    ready.pop();
    ++processed;
    for (int v : succ[u])
      if (--indeg[v] == 0) ready.push(v);
  }
  if (processed != static_cast<int>(comb.size())) {
    // Walk the residue to recover one concrete cycle for the error message.
    std::unordered_map<std::string, int> residue_driver;
    for (int i : comb)
      if (indeg[i] > 0) residue_driver[netlist.gates[static_cast<size_t>(i)].output] = i;
    int start = -1;
    for (int i : comb)
      if (indeg[i] > 0) {
        start = i;
        break;
      }
    std::vector<int> trail;
    std::unordered_map<int, int> pos;
    int cur = start;
    while (!pos.count(cur)) {
      pos[cur] = static_cast<int>(trail.size());
      trail.push_back(cur);
      int next = -1;
      for (const auto& net : netlist.gates[static_cast<size_t>(cur)].inputs) {
        auto it = residue_driver.find(net);
        if (it != residue_driver.end()) {
          next = it->second;
          break;
        }
      }
      cur = next;
    }
    std::vector<std::string> names;
    for (size_t i = static_cast<size_t>(pos[cur]); i < trail.size(); ++i)
      names.push_back(netlist.gates[static_cast<size_t>(trail[i])].name);
    throw CombinationalCycleError(std::move(names));
  }
}

// ---------------------------------------------------------------------------
// Structural parser

namespace {

struct Token {
  enum Kind { Ident, Punct, End } kind = End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_space_and_comments();
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::End;
      current_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        step();
      current_.kind = Token::Ident;
      current_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (c == '(' || c == ')' || c == ',' || c == ';' || c == '.') {
      current_.kind = Token::Punct;
      current_.text = std::string(1, c);
      step();
      return;
    }
    throw SyntaxError(line_, column_, std::string("unexpected character '") + c + "'");
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        step();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') step();
      } else {
        break;
      }
    }
  }

  void step() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

class Parser {
 public:
  Parser(const std::string& text, const CellCatalog& catalog, double clock_period_ns)
      : lex_(text), catalog_(catalog) {
    netlist_.clock_period_ns = clock_period_ns;
  }

  Netlist run() {
    expect_keyword("module");
    netlist_.name = expect_ident("module name");
    expect_punct("(");
    if (!at_punct(")")) {
      port_order_.push_back(expect_ident("port name"));
      while (at_punct(",")) {
        lex_.take();
        port_order_.push_back(expect_ident("port name"));
      }
    }
    expect_punct(")");
    expect_punct(";");

    while (lex_.peek().kind == Token::Ident && lex_.peek().text != "endmodule") {
      Token head = lex_.take();
      if (head.text == "input") {
        declare_list(head, inputs_);
      } else if (head.text == "output") {
        declare_list(head, outputs_);
      } else if (head.text == "wire") {
        declare_list(head, wires_);
      } else {
        parse_instance(head);
      }
    }
    expect_keyword("endmodule");
    if (lex_.peek().kind != Token::End)
      throw SyntaxError(lex_.peek().line, lex_.peek().column, "trailing text after endmodule");

    finish_ports();
    validate_netlist(netlist_, catalog_);
    return netlist_;
  }

 private:
  void declare_list(const Token& head, std::vector<std::string>& into) {
    do {
      Token name = lex_.peek();
      std::string id = expect_ident("net name");
      if (declared_.count(id))
        throw SyntaxError(name.line, name.column, "net '" + id + "' declared twice");
      declared_.insert(id);
      into.push_back(id);
    } while (take_if(","));
    expect_punct(";");
    (void)head;
  }

  void parse_instance(const Token& kind_tok) {
    int kind = catalog_.index_of(kind_tok.text);
    if (kind < 0) throw UnknownCellError(kind_tok.text, at(kind_tok));
    const CellKind& cell = catalog_.kind(kind);

    GateInstance gate;
    gate.kind = kind;
    gate.name = expect_ident("instance name");
    expect_punct("(");

    std::unordered_map<std::string, std::string> pin_to_net;
    do {
      Token dot = lex_.peek();
      expect_punct(".");
      std::string pin = expect_ident("pin name");
      expect_punct("(");
      Token net_tok = lex_.peek();
      std::string net = expect_ident("net name");
      if (!declared_.count(net))
        throw SyntaxError(net_tok.line, net_tok.column, "net '" + net + "' is not declared");
      expect_punct(")");
      if (!pin_to_net.emplace(pin, net).second)
        throw SyntaxError(dot.line, dot.column,
                          "pin '" + pin + "' connected twice on '" + gate.name + "'");
    } while (take_if(","));
    expect_punct(")");
    expect_punct(";");

    // Map named pins onto the ordered input list plus the single output.
    std::vector<std::string> pins = input_pin_names(cell);
    std::string out_pin = cell.is_sequential ? "Q" : "Y";
    for (const auto& pin : pins) {
      auto it = pin_to_net.find(pin);
      if (it == pin_to_net.end())
        throw SyntaxError(kind_tok.line, kind_tok.column,
                          "gate '" + gate.name + "' leaves pin '" + pin + "' unconnected");
      gate.inputs.push_back(it->second);
      pin_to_net.erase(it);
    }
    auto out_it = pin_to_net.find(out_pin);
    if (out_it == pin_to_net.end())
      throw SyntaxError(kind_tok.line, kind_tok.column,
                        "gate '" + gate.name + "' leaves pin '" + out_pin + "' unconnected");
    gate.output = out_it->second;
    pin_to_net.erase(out_it);
    if (!pin_to_net.empty())
      throw SyntaxError(kind_tok.line, kind_tok.column,
                        "gate '" + gate.name + "' connects unknown pin '" +
                            pin_to_net.begin()->first + "'");
    netlist_.gates.push_back(std::move(gate));
  }

  static std::vector<std::string> input_pin_names(const CellKind& cell) {
    std::vector<std::string> pins;
    if (cell.is_sequential) {
      pins.push_back("D");
      return pins;
    }
    for (int i = 0; i < cell.input_pin_count; ++i)
      pins.push_back(std::string(1, static_cast<char>('A' + i)));
    return pins;
  }

  void finish_ports() {
    std::unordered_map<std::string, int> dir;  // 1 = input, 2 = output
    for (const auto& n : inputs_) dir[n] = 1;
    for (const auto& n : outputs_) dir[n] = 2;
    for (const auto& p : port_order_) {
      auto it = dir.find(p);
      if (it == dir.end())
        throw SyntaxError(1, 1, "port '" + p + "' has no input/output declaration");
      (it->second == 1 ? netlist_.primary_inputs : netlist_.primary_outputs).push_back(p);
    }
    for (const auto& n : inputs_)
      if (std::find(port_order_.begin(), port_order_.end(), n) == port_order_.end())
        throw SyntaxError(1, 1, "input '" + n + "' is missing from the port list");
    for (const auto& n : outputs_)
      if (std::find(port_order_.begin(), port_order_.end(), n) == port_order_.end())
        throw SyntaxError(1, 1, "output '" + n + "' is missing from the port list");
  }

  static std::string at(const Token& t) {
    return "at line " + std::to_string(t.line) + ", column " + std::to_string(t.column);
  }

  bool at_punct(const std::string& p) const {
    return lex_.peek().kind == Token::Punct && lex_.peek().text == p;
  }

  bool take_if(const std::string& p) {
    if (!at_punct(p)) return false;
    lex_.take();
    return true;
  }

  void expect_punct(const std::string& p) {
    if (!at_punct(p))
      throw SyntaxError(lex_.peek().line, lex_.peek().column,
                        "expected '" + p + "', found '" + lex_.peek().text + "'");
    lex_.take();
  }

  std::string expect_ident(const std::string& what) {
    if (lex_.peek().kind != Token::Ident)
      throw SyntaxError(lex_.peek().line, lex_.peek().column,
                        "expected " + what + ", found '" + lex_.peek().text + "'");
    return lex_.take().text;
  }

  void expect_keyword(const std::string& kw) {
    if (lex_.peek().kind != Token::Ident || lex_.peek().text != kw)
      throw SyntaxError(lex_.peek().line, lex_.peek().column,
                        "expected '" + kw + "', found '" + lex_.peek().text + "'");
    lex_.take();
  }

  Lexer lex_;
  const CellCatalog& catalog_;
  Netlist netlist_;
  std::vector<std::string> port_order_;
  std::vector<std::string> inputs_, outputs_, wires_;
  std::unordered_set<std::string> declared_;
};

}  // namespace

Netlist parse_structural(const std::string& text, const CellCatalog& catalog,
                         double clock_period_ns) {
  return Parser(text, catalog, clock_period_ns).run();
}

// ---------------------------------------------------------------------------
// Canonical JSON form

namespace {

const ordered_json& require(const ordered_json& doc, const std::string& key,
                            const std::string& path) {
  if (!doc.is_object()) throw SchemaError(path, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(path + "/" + key, "missing key");
  return *it;
}

std::string require_string(const ordered_json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

double require_number(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

std::vector<std::string> require_string_array(const ordered_json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  std::vector<std::string> out;
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(require_string(v[i], path + "/" + std::to_string(i)));
  return out;
}

}  // namespace

Netlist parse_canonical(const std::string& text, const CellCatalog& catalog) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  Netlist n;
  n.name = require_string(require(doc, "name", ""), "/name");
  n.clock_period_ns = require_number(require(doc, "clock_period_ns", ""), "/clock_period_ns");
  if (!(n.clock_period_ns > 0))
    throw SchemaError("/clock_period_ns", "must be positive");
  n.primary_inputs =
      require_string_array(require(doc, "primary_inputs", ""), "/primary_inputs");
  n.primary_outputs =
      require_string_array(require(doc, "primary_outputs", ""), "/primary_outputs");
  const ordered_json& gates = require(doc, "gates", "");
  if (!gates.is_array()) throw SchemaError("/gates", "expected an array");
  for (size_t i = 0; i < gates.size(); ++i) {
    std::string path = "/gates/" + std::to_string(i);
    const ordered_json& g = gates[i];
    GateInstance gate;
    gate.name = require_string(require(g, "name", path), path + "/name");
    std::string kind_name = require_string(require(g, "kind", path), path + "/kind");
    gate.kind = catalog.index_of(kind_name);
    if (gate.kind < 0) throw UnknownCellError(kind_name, "at " + path + "/kind");
    gate.inputs = require_string_array(require(g, "inputs", path), path + "/inputs");
    if (static_cast<int>(gate.inputs.size()) != catalog.kind(gate.kind).input_pin_count)
      throw SchemaError(path + "/inputs",
                        "kind '" + kind_name + "' expects " +
                            std::to_string(catalog.kind(gate.kind).input_pin_count) +
                            " inputs, found " + std::to_string(gate.inputs.size()));
    gate.output = require_string(require(g, "output", path), path + "/output");
    n.gates.push_back(std::move(gate));
  }
  validate_netlist(n, catalog);
  return n;
}

std::string write_canonical(const Netlist& netlist, const CellCatalog& catalog) {
  ordered_json doc;
  doc["name"] = netlist.name;
  doc["clock_period_ns"] = netlist.clock_period_ns;
  doc["primary_inputs"] = netlist.primary_inputs;
  doc["primary_outputs"] = netlist.primary_outputs;
  ordered_json gates = ordered_json::array();
  for (const auto& g : netlist.gates) {
    ordered_json jg;
    jg["name"] = g.name;
    jg["kind"] = catalog.kind(g.kind).name;
    jg["inputs"] = g.inputs;
    jg["output"] = g.output;
    gates.push_back(std::move(jg));
  }
  doc["gates"] = std::move(gates);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Catalog JSON

CellCatalog parse_catalog(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  const ordered_json& kinds = require(doc, "kinds", "");
  if (!kinds.is_array()) throw SchemaError("/kinds", "expected an array");
  std::vector<CellKind> out;
  for (size_t i = 0; i < kinds.size(); ++i) {
    std::string path = "/kinds/" + std::to_string(i);
    const ordered_json& k = kinds[i];
    CellKind kind;
    kind.name = require_string(require(k, "name", path), path + "/name");
    kind.function = require_string(require(k, "function", path), path + "/function");
    double pins = require_number(require(k, "inputs", path), path + "/inputs");
    if (pins < 1 || pins != static_cast<int>(pins))
      throw SchemaError(path + "/inputs", "expected a positive integer");
    kind.input_pin_count = static_cast<int>(pins);
    const ordered_json& seq = require(k, "sequential", path);
    if (!seq.is_boolean()) throw SchemaError(path + "/sequential", "expected a boolean");
    kind.is_sequential = seq.get<bool>();
    out.push_back(std::move(kind));
  }
  return CellCatalog(std::move(out));
}

std::string write_catalog(const CellCatalog& catalog) {
  ordered_json doc;
  ordered_json kinds = ordered_json::array();
  for (const auto& k : catalog.kinds()) {
    ordered_json jk;
    jk["name"] = k.name;
    jk["function"] = k.function;
    jk["inputs"] = k.input_pin_count;
    jk["sequential"] = k.is_sequential;
    kinds.push_back(std::move(jk));
  }
  doc["kinds"] = std::move(kinds);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// File helpers

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed while reading '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace relgraph
