// SPDX-License-Identifier: Apache-2.0
//
// Seeded generator of random valid netlists for parser property tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "pfg/circuits.hpp"

namespace netgen {

inline pfg::Netlist random_netlist(std::mt19937_64& rng) {
  using pfg::GateKind;
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto flip = [&]() { return pick(2) == 1; };

  pfg::Netlist n;
  n.name = "gen_" + std::to_string(pick(100000));
  const std::size_t num_inputs = 1 + pick(4);
  for (std::size_t i = 0; i < num_inputs; ++i) n.inputs.push_back("in" + std::to_string(i));

  std::vector<std::string> wires = n.inputs;
  const GateKind kinds[] = {GateKind::OR,   GateKind::AND, GateKind::NOT, GateKind::NOR,
                            GateKind::NAND, GateKind::XOR, GateKind::XNOR};
  const std::size_t num_gates = 1 + pick(8);
  for (std::size_t g = 0; g < num_gates; ++g) {
    pfg::GateInst inst;
    inst.id = "g" + std::to_string(g);
    inst.spec.kind = kinds[pick(7)];
    inst.source_a = {wires[pick(wires.size())], flip()};
    if (!pfg::is_single_input(inst.spec.kind))
      inst.source_b = pfg::WireRef{wires[pick(wires.size())], flip()};
    wires.push_back(inst.id);
    n.gates.push_back(std::move(inst));
  }

  const std::size_t num_outputs = 1 + pick(3);
  for (std::size_t o = 0; o < num_outputs; ++o)
    n.outputs.push_back({"out" + std::to_string(o), {wires[pick(wires.size())], flip()}});
  return n;
}

}  // namespace netgen
