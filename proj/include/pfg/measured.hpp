// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pfg/circuits.hpp"
#include "pfg/gates.hpp"
#include "pfg/signal.hpp"
#include "pfg/spectral.hpp"

namespace pfg {

/// Measured-mode frequency change: draw the true shift from the response
/// model, synthesize the full electrode trace, then recover the shift through
/// the spectral pipeline. With zero trace noise the recovered value tracks
/// the drawn one to well under the classification margins, so sampled and
/// measured modes agree whenever the response stds are zero.
inline double measured_delta_f(StimulusPattern pattern, const ResponseModel& model,
                               const OscillationModel& osc, Rng& rng,
                               const SpectralConfig& cfg = {},
                               double pre_duration_s = kDefaultWindowS,
                               double post_duration_s = kDefaultWindowS) {
  const double injected = sample_delta_f(pattern, model, rng);
  const Trace trace = synthesize_trace(osc, injected, pre_duration_s, post_duration_s, rng);
  return compute_delta_f(trace, cfg);
}

inline bool evaluate_gate_measured(const GateSpec& spec, bool a, bool b,
                                   const ResponseModel& model, const OscillationModel& osc,
                                   Rng& rng, const SpectralConfig& cfg = {}) {
  if (is_single_input(spec.kind) && b)
    throw std::invalid_argument("NOT gate takes a single input; b must be 0");
  const StimulusPattern pattern = stimuli_for_inputs(a, b, spec.invert_a, spec.invert_b);
  return classify(measured_delta_f(pattern, model, osc, rng, cfg),
                  threshold_rule_for(spec.kind));
}

/// Cascade a circuit in measured mode: every gate runs through trace
/// synthesis and spectral recovery, drawing from a stream keyed by
/// (seed, gate id) exactly like the sampled evaluator.
inline std::vector<bool> evaluate_circuit_measured(const Netlist& n,
                                                   const std::vector<bool>& inputs,
                                                   const ResponseModel& model,
                                                   const OscillationModel& osc,
                                                   std::uint64_t seed,
                                                   const SpectralConfig& cfg = {}) {
  require_input_width(n, inputs.size());
  std::map<std::string, bool> wires;
  for (std::size_t i = 0; i < inputs.size(); ++i) wires[n.inputs[i]] = inputs[i];
  for (const auto& g : n.gates) {
    const bool a = wires.at(g.source_a.name) != g.source_a.inverted;
    const bool b = g.source_b ? (wires.at(g.source_b->name) != g.source_b->inverted) : false;
    Rng rng(gate_stream_seed(seed, g.id));
    wires[g.id] = evaluate_gate_measured(g.spec, a, b, model, osc, rng, cfg);
  }
  std::vector<bool> out;
  out.reserve(n.outputs.size());
  for (const auto& [name, ref] : n.outputs) out.push_back(wires.at(ref.name) != ref.inverted);
  return out;
}

/// Sampled-mode twin of evaluate_circuit_measured that also reports every
/// wire value (inputs first, then gate outputs in topological order). Used to
/// inspect internal error propagation.
inline std::vector<std::pair<std::string, bool>> evaluate_circuit_wires(
    const Netlist& n, const std::vector<bool>& inputs, const ResponseModel& model,
    std::uint64_t seed) {
  require_input_width(n, inputs.size());
  const detail::CompiledNetlist c(n);
  std::vector<bool> wires(c.num_inputs + c.gates.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) wires[i] = inputs[i];
  c.run_trial(wires, model, seed);
  std::vector<std::pair<std::string, bool>> out;
  for (std::size_t i = 0; i < n.inputs.size(); ++i) out.push_back({n.inputs[i], wires[i]});
  for (std::size_t g = 0; g < n.gates.size(); ++g)
    out.push_back({n.gates[g].id, wires[c.num_inputs + g]});
  return out;
}

}  // namespace pfg
