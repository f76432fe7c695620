// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pfg/errors.hpp"
#include "pfg/gates.hpp"
#include "pfg/rng.hpp"
#include "pfg/signal.hpp"

namespace pfg {

/// Reference to a named wire; `inverted` flips the logic value at the
/// consuming end (stimulus applied when the value is 0).
struct WireRef {
  std::string name;
  bool inverted = false;
  friend bool operator==(const WireRef&, const WireRef&) = default;
};

struct GateInst {
  std::string id;  // also names the gate's output wire
  GateSpec spec;
  WireRef source_a;
  std::optional<WireRef> source_b;  // absent for NOT
  friend bool operator==(const GateInst&, const GateInst&) = default;
};

/// A combinational circuit: a DAG of gate instances over named wires.
/// Gates are stored in topological order (every source is a declared input
/// or an earlier gate's output).
struct Netlist {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<GateInst> gates;
  std::vector<std::pair<std::string, WireRef>> outputs;
  friend bool operator==(const Netlist&, const Netlist&) = default;
};

struct TruthTable {
  std::size_t num_inputs = 0;
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<std::vector<bool>> rows;  // 2^num_inputs rows, one bit per output
};

/// Input-combination convention used throughout: combination index i assigns
/// the first declared input the most significant bit.
inline std::vector<bool> input_bits_for_combo(std::size_t combo, std::size_t num_inputs) {
  std::vector<bool> bits(num_inputs);
  for (std::size_t j = 0; j < num_inputs; ++j)
    bits[j] = ((combo >> (num_inputs - 1 - j)) & 1u) != 0;
  return bits;
}

inline std::string combo_key(std::size_t combo, std::size_t num_inputs) {
  std::string s(num_inputs, '0');
  for (std::size_t j = 0; j < num_inputs; ++j)
    if ((combo >> (num_inputs - 1 - j)) & 1u) s[j] = '1';
  return s;
}

namespace detail {

inline bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

struct Token {
  std::string text;
  std::size_t col = 0;  // 1-based
};

inline std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

// Strips a trailing '!' marking an inverted reference.
inline WireRef parse_wire_ref(const Token& tok, std::size_t line_no) {
  std::string name = tok.text;
  bool inverted = false;
  if (!name.empty() && name.back() == '!') {
    inverted = true;
    name.pop_back();
  }
  if (!valid_identifier(name))
    throw SyntaxError("invalid wire name '" + tok.text + "'", line_no, tok.col);
  return {std::move(name), inverted};
}

}  // namespace detail

/// Parse the line-oriented netlist DSL:
///
///   circuit <name>
///   inputs <w1> <w2> ...
///   gate <id> <KIND> <src1>[!] [<src2>[!]]
///   outputs <NAME>=<wire>[!] ...
///
/// `#` starts a comment; a `!` suffix marks an inverted reference. Gates may
/// reference wires defined further down; the parsed netlist is stored in
/// topological order. Cyclic definitions are rejected.
inline Netlist parse_netlist(std::string_view text) {
  struct PendingGate {
    GateInst inst;
    std::size_t line;
    std::size_t id_col;
    std::size_t a_col;
    std::size_t b_col;
  };

  Netlist net;
  std::vector<PendingGate> pending;
  std::vector<std::pair<std::pair<std::string, WireRef>, std::pair<std::size_t, std::size_t>>>
      outputs_with_loc;
  bool saw_circuit = false, saw_inputs = false, saw_outputs = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    const auto toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;

    if (!saw_circuit) {
      if (head != "circuit")
        throw SyntaxError("expected 'circuit <name>' as the first statement", line_no,
                          toks[0].col);
      if (toks.size() != 2 || !detail::valid_identifier(toks[1].text))
        throw SyntaxError("expected 'circuit <name>'", line_no,
                          toks.size() > 1 ? toks[1].col : toks[0].col);
      net.name = toks[1].text;
      saw_circuit = true;
      continue;
    }
    if (!saw_inputs) {
      if (head != "inputs")
        throw SyntaxError("expected 'inputs <w1> ...' after the circuit line", line_no,
                          toks[0].col);
      if (toks.size() < 2)
        throw SyntaxError("inputs line requires at least one wire", line_no, toks[0].col);
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (!detail::valid_identifier(toks[i].text))
          throw SyntaxError("invalid input name '" + toks[i].text + "'", line_no, toks[i].col);
        if (std::find(net.inputs.begin(), net.inputs.end(), toks[i].text) != net.inputs.end())
          throw DuplicateId("duplicate input '" + toks[i].text + "'", line_no, toks[i].col);
        net.inputs.push_back(toks[i].text);
      }
      saw_inputs = true;
      continue;
    }
    if (saw_outputs)
      throw SyntaxError("nothing may follow the outputs line", line_no, toks[0].col);

    if (head == "gate") {
      if (toks.size() < 4 || toks.size() > 5)
        throw SyntaxError("expected 'gate <id> <KIND> <src1> [<src2>]'", line_no, toks[0].col);
      PendingGate pg;
      pg.line = line_no;
      pg.id_col = toks[1].col;
      if (!detail::valid_identifier(toks[1].text))
        throw SyntaxError("invalid gate id '" + toks[1].text + "'", line_no, toks[1].col);
      pg.inst.id = toks[1].text;
      GateKind kind;
      if (!try_parse_gate_kind(toks[2].text, kind))
        throw UnknownGateKind("unknown gate kind '" + toks[2].text + "'", line_no, toks[2].col);
      pg.inst.spec.kind = kind;
      const std::size_t arity = is_single_input(kind) ? 1 : 2;
      if (toks.size() != 3 + arity)
        throw SyntaxError(std::string(to_string(kind)) + " gate takes " +
                              std::to_string(arity) + (arity == 1 ? " source" : " sources"),
                          line_no, toks[0].col);
      pg.inst.source_a = detail::parse_wire_ref(toks[3], line_no);
      pg.a_col = toks[3].col;
      if (arity == 2) {
        pg.inst.source_b = detail::parse_wire_ref(toks[4], line_no);
        pg.b_col = toks[4].col;
      }
      pending.push_back(std::move(pg));
      continue;
    }
    if (head == "outputs") {
      if (toks.size() < 2)
        throw SyntaxError("outputs line requires at least one <NAME>=<wire> mapping", line_no,
                          toks[0].col);
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const std::string& t = toks[i].text;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= t.size())
          throw SyntaxError("expected '<NAME>=<wire>', got '" + t + "'", line_no, toks[i].col);
        std::string name = t.substr(0, eq);
        if (!detail::valid_identifier(name))
          throw SyntaxError("invalid output name '" + name + "'", line_no, toks[i].col);
        for (const auto& o : outputs_with_loc)
          if (o.first.first == name)
            throw DuplicateId("duplicate output '" + name + "'", line_no, toks[i].col);
        detail::Token ref_tok{t.substr(eq + 1), toks[i].col + eq + 1};
        WireRef ref = detail::parse_wire_ref(ref_tok, line_no);
        outputs_with_loc.push_back({{std::move(name), std::move(ref)}, {line_no, ref_tok.col}});
      }
      saw_outputs = true;
      continue;
    }
    throw SyntaxError("unknown statement '" + head + "'", line_no, toks[0].col);
  }

  if (!saw_circuit) throw SyntaxError("empty netlist: expected 'circuit <name>'", line_no, 1);
  if (!saw_inputs) throw SyntaxError("missing 'inputs' line", line_no, 1);
  if (!saw_outputs) throw SyntaxError("missing 'outputs' line", line_no, 1);

  // Wire namespace: inputs and gate ids together.
  std::map<std::string, std::size_t> defined;  // name -> 0 for inputs, 1+gate index
  for (const auto& in : net.inputs) defined.emplace(in, 0);
  for (std::size_t g = 0; g < pending.size(); ++g) {
    auto [it, fresh] = defined.emplace(pending[g].inst.id, g + 1);
    if (!fresh)
      throw DuplicateId("duplicate id '" + pending[g].inst.id + "'", pending[g].line,
                        pending[g].id_col);
  }
  auto check_ref = [&](const WireRef& ref, std::size_t line, std::size_t col) {
    if (!defined.contains(ref.name))
      throw UndefinedWire("undefined wire '" + ref.name + "'", line, col);
  };
  for (const auto& pg : pending) {
    check_ref(pg.inst.source_a, pg.line, pg.a_col);
    if (pg.inst.source_b) check_ref(*pg.inst.source_b, pg.line, pg.b_col);
  }
  for (const auto& [out, loc] : outputs_with_loc) check_ref(out.second, loc.first, loc.second);

  // Stable topological order: repeatedly place the first gate (in source
  // order) whose sources are all inputs or already-placed gates.
  std::vector<bool> placed(pending.size(), false);
  std::map<std::string, bool> ready;
  for (const auto& in : net.inputs) ready[in] = true;
  for (std::size_t placed_count = 0; placed_count < pending.size();) {
    bool progress = false;
    for (std::size_t g = 0; g < pending.size(); ++g) {
      if (placed[g]) continue;
      const GateInst& inst = pending[g].inst;
      const bool ok = ready.contains(inst.source_a.name) &&
                      (!inst.source_b || ready.contains(inst.source_b->name));
      if (!ok) continue;
      net.gates.push_back(inst);
      ready[inst.id] = true;
      placed[g] = true;
      ++placed_count;
      progress = true;
    }
    if (!progress) {
      for (std::size_t g = 0; g < pending.size(); ++g)
        if (!placed[g])
          throw CycleDetected("gate '" + pending[g].inst.id + "' is part of a dependency cycle",
                              pending[g].line, pending[g].id_col);
    }
  }

  for (auto& [out, loc] : outputs_with_loc) net.outputs.push_back(std::move(out));
  return net;
}

/// Canonical DSL text; parse(serialize(n)) is structurally identical to n.
inline std::string serialize_netlist(const Netlist& net) {
  std::ostringstream os;
  os << "circuit " << net.name << "\n";
  os << "inputs";
  for (const auto& in : net.inputs) os << " " << in;
  os << "\n";
  auto emit_ref = [&](const WireRef& r) {
    os << r.name;
    if (r.inverted) os << "!";
  };
  for (const auto& g : net.gates) {
    os << "gate " << g.id << " " << to_string(g.spec.kind) << " ";
    emit_ref(g.source_a);
    if (g.source_b) {
      os << " ";
      emit_ref(*g.source_b);
    }
    os << "\n";
  }
  os << "outputs";
  for (const auto& [name, ref] : net.outputs) {
    os << " " << name << "=";
    emit_ref(ref);
  }
  os << "\n";
  return os.str();
}

inline std::vector<std::string> builtin_names() {
  return {"half_adder", "full_adder", "decoder_2to4", "xor_from_nand"};
}

/// Stock circuits. Gate counts: half_adder 2, full_adder 5, decoder_2to4 4,
/// xor_from_nand 4.
inline Netlist builtin(std::string_view name) {
  auto gate2 = [](std::string id, GateKind k, WireRef a, WireRef b) {
    return GateInst{std::move(id), GateSpec{k}, std::move(a), std::move(b)};
  };
  Netlist n;
  if (name == "half_adder") {
    n.name = "half_adder";
    n.inputs = {"A", "B"};
    n.gates = {gate2("x1", GateKind::XOR, {"A"}, {"B"}),
               gate2("a1", GateKind::AND, {"A"}, {"B"})};
    n.outputs = {{"SUM", {"x1"}}, {"CARRY", {"a1"}}};
  } else if (name == "full_adder") {
    n.name = "full_adder";
    n.inputs = {"A", "B", "Cin"};
    n.gates = {gate2("s1", GateKind::XOR, {"A"}, {"B"}),
               gate2("s2", GateKind::XOR, {"s1"}, {"Cin"}),
               gate2("c1", GateKind::AND, {"A"}, {"B"}),
               gate2("c2", GateKind::AND, {"s1"}, {"Cin"}),
               gate2("o1", GateKind::OR, {"c1"}, {"c2"})};
    n.outputs = {{"SUM", {"s2"}}, {"COUT", {"o1"}}};
  } else if (name == "decoder_2to4") {
    n.name = "decoder_2to4";
    n.inputs = {"A", "B"};
    n.gates = {gate2("d0", GateKind::AND, {"A", true}, {"B", true}),
               gate2("d1", GateKind::AND, {"A", true}, {"B", false}),
               gate2("d2", GateKind::AND, {"A", false}, {"B", true}),
               gate2("d3", GateKind::AND, {"A", false}, {"B", false})};
    n.outputs = {{"D0", {"d0"}}, {"D1", {"d1"}}, {"D2", {"d2"}}, {"D3", {"d3"}}};
  } else if (name == "xor_from_nand") {
    n.name = "xor_from_nand";
    n.inputs = {"A", "B"};
    n.gates = {gate2("n1", GateKind::NAND, {"A"}, {"B"}),
               gate2("n2", GateKind::NAND, {"A"}, {"n1"}),
               gate2("n3", GateKind::NAND, {"B"}, {"n1"}),
               gate2("n4", GateKind::NAND, {"n2"}, {"n3"})};
    n.outputs = {{"Y", {"n4"}}};
  } else {
    throw UnknownBuiltin("unknown builtin circuit '" + std::string(name) + "'");
  }
  return n;
}

namespace detail {

// Index-based view of a netlist for repeated evaluation. Wire slots: inputs
// first, then one slot per gate output.
struct CompiledNetlist {
  struct Gate {
    GateSpec spec;
    std::size_t a_slot = 0;
    bool a_inv = false;
    std::size_t b_slot = 0;  // unused for NOT
    bool b_inv = false;
    bool single = false;
    std::uint64_t id_hash = 0;
  };
  std::size_t num_inputs = 0;
  std::vector<Gate> gates;
  std::vector<std::pair<std::size_t, bool>> outputs;  // slot, inverted

  explicit CompiledNetlist(const Netlist& n) {
    num_inputs = n.inputs.size();
    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < n.inputs.size(); ++i) slot[n.inputs[i]] = i;
    for (std::size_t g = 0; g < n.gates.size(); ++g) {
      const GateInst& inst = n.gates[g];
      Gate cg;
      cg.spec = inst.spec;
      cg.single = is_single_input(inst.spec.kind);
      cg.a_slot = slot.at(inst.source_a.name);
      cg.a_inv = inst.source_a.inverted;
      if (inst.source_b) {
        cg.b_slot = slot.at(inst.source_b->name);
        cg.b_inv = inst.source_b->inverted;
      }
      cg.id_hash = fnv1a64(inst.id);
      slot[inst.id] = num_inputs + g;
      gates.push_back(cg);
    }
    for (const auto& [name, ref] : n.outputs) outputs.push_back({slot.at(ref.name), ref.inverted});
  }

  // One sampled-mode trial. `wires` must have num_inputs + gates.size() slots
  // with the input values already set.
  void run_trial(std::vector<bool>& wires, const ResponseModel& model,
                 std::uint64_t trial_seed) const {
    for (std::size_t g = 0; g < gates.size(); ++g) {
      const Gate& cg = gates[g];
      const bool a = wires[cg.a_slot] != cg.a_inv;
      const bool b = cg.single ? false : (wires[cg.b_slot] != cg.b_inv);
      Rng rng(splitmix64(trial_seed ^ cg.id_hash));
      const StimulusPattern pattern = stimuli_for_inputs(a, b, cg.spec.invert_a, cg.spec.invert_b);
      wires[num_inputs + g] =
          classify(sample_delta_f(pattern, model, rng), threshold_rule_for(cg.spec.kind));
    }
  }
};

}  // namespace detail

/// Check that input-vector width matches the netlist.
inline void require_input_width(const Netlist& n, std::size_t got) {
  if (got != n.inputs.size())
    throw std::invalid_argument("circuit '" + n.name + "' takes " +
                                std::to_string(n.inputs.size()) + " inputs, got " +
                                std::to_string(got));
}

/// Evaluate the circuit once in sampled mode. Every gate draws its own
/// frequency change from a stream keyed by (seed, gate id), so the result is
/// independent of evaluation order. Returns the declared outputs.
inline std::vector<bool> evaluate_circuit(const Netlist& n, const std::vector<bool>& inputs,
                                          const ResponseModel& model, std::uint64_t seed) {
  require_input_width(n, inputs.size());
  detail::CompiledNetlist c(n);
  std::vector<bool> wires(c.num_inputs + c.gates.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) wires[i] = inputs[i];
  c.run_trial(wires, model, seed);
  std::vector<bool> out;
  out.reserve(c.outputs.size());
  for (const auto& [s, inv] : c.outputs) out.push_back(wires[s] != inv);
  return out;
}

/// Noise-free Boolean evaluation (what the circuit computes when every gate
/// classifies perfectly).
inline std::vector<bool> ideal_eval(const Netlist& n, const std::vector<bool>& inputs) {
  require_input_width(n, inputs.size());
  std::map<std::string, bool> wires;
  for (std::size_t i = 0; i < inputs.size(); ++i) wires[n.inputs[i]] = inputs[i];
  for (const auto& g : n.gates) {
    const bool a = wires.at(g.source_a.name) != g.source_a.inverted;
    const bool b = g.source_b ? (wires.at(g.source_b->name) != g.source_b->inverted) : false;
    wires[g.id] = ideal_gate_output(g.spec, a, b);
  }
  std::vector<bool> out;
  out.reserve(n.outputs.size());
  for (const auto& [name, ref] : n.outputs) out.push_back(wires.at(ref.name) != ref.inverted);
  return out;
}

inline constexpr std::size_t kMaxTruthTableInputs = 16;

inline TruthTable ideal_truth_table(const Netlist& n) {
  if (n.inputs.size() > kMaxTruthTableInputs)
    throw TooManyGates("truth-table enumeration supports at most " +
                       std::to_string(kMaxTruthTableInputs) + " inputs");
  TruthTable t;
  t.num_inputs = n.inputs.size();
  t.input_names = n.inputs;
  for (const auto& [name, ref] : n.outputs) t.output_names.push_back(name);
  const std::size_t combos = std::size_t{1} << t.num_inputs;
  for (std::size_t c = 0; c < combos; ++c)
    t.rows.push_back(ideal_eval(n, input_bits_for_combo(c, t.num_inputs)));
  return t;
}

}  // namespace pfg
