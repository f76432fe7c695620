// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "pfg/errors.hpp"
#include "pfg/rng.hpp"
#include "pfg/signal.hpp"

namespace pfg {

enum class GateKind { OR, AND, NOT, NOR, NAND, XOR, XNOR };

inline constexpr std::string_view to_string(GateKind k) noexcept {
  switch (k) {
    case GateKind::OR: return "OR";
    case GateKind::AND: return "AND";
    case GateKind::NOT: return "NOT";
    case GateKind::NOR: return "NOR";
    case GateKind::NAND: return "NAND";
    case GateKind::XOR: return "XOR";
    default: return "XNOR";
  }
}

inline bool try_parse_gate_kind(std::string_view s, GateKind& out) noexcept {
  for (GateKind k : {GateKind::OR, GateKind::AND, GateKind::NOT, GateKind::NOR, GateKind::NAND,
                     GateKind::XOR, GateKind::XNOR}) {
    if (s == to_string(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

inline constexpr bool is_single_input(GateKind k) noexcept { return k == GateKind::NOT; }

/// Maps a frequency change to a Boolean output: either a single cut point or
/// an inclusive band. Complemented gate kinds keep the thresholds and flip
/// the output polarity.
struct ThresholdRule {
  enum class Shape { single, band };
  Shape shape = Shape::single;
  // single
  double threshold_pct = 0.0;
  bool high_when_above = true;
  // band
  double lo_pct = 0.0;
  double hi_pct = 0.0;
  bool one_inside = true;

  static constexpr ThresholdRule single(double threshold, bool high_when_above) {
    ThresholdRule r;
    r.shape = Shape::single;
    r.threshold_pct = threshold;
    r.high_when_above = high_when_above;
    return r;
  }
  static constexpr ThresholdRule band(double lo, double hi, bool one_inside) {
    ThresholdRule r;
    r.shape = Shape::band;
    r.lo_pct = lo;
    r.hi_pct = hi;
    r.one_inside = one_inside;
    return r;
  }
};

/// Canonical rule per gate kind. OR fires at a 10% rise, AND at 24%, XOR
/// inside the inclusive [4.9%, 32%] band; NOR/NAND/XNOR are the pointwise
/// complements. NOT reads its single stimulus channel against the 10% cut
/// with inverted polarity.
inline constexpr ThresholdRule threshold_rule_for(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::OR: return ThresholdRule::single(10.0, true);
    case GateKind::NOR: return ThresholdRule::single(10.0, false);
    case GateKind::AND: return ThresholdRule::single(24.0, true);
    case GateKind::NAND: return ThresholdRule::single(24.0, false);
    case GateKind::XOR: return ThresholdRule::band(4.9, 32.0, true);
    case GateKind::XNOR: return ThresholdRule::band(4.9, 32.0, false);
    default: return ThresholdRule::single(10.0, false);  // NOT
  }
}

/// Boundary semantics: >= at single thresholds, inclusive band edges.
inline constexpr bool classify(double delta_f_pct, const ThresholdRule& rule) noexcept {
  if (rule.shape == ThresholdRule::Shape::single)
    return (delta_f_pct >= rule.threshold_pct) == rule.high_when_above;
  return (delta_f_pct >= rule.lo_pct && delta_f_pct <= rule.hi_pct) == rule.one_inside;
}

/// A gate instance: kind plus per-input inversion. An inverted input applies
/// its stimulus when the logic value is 0.
struct GateSpec {
  GateKind kind = GateKind::OR;
  bool invert_a = false;
  bool invert_b = false;
  friend constexpr bool operator==(GateSpec, GateSpec) = default;
};

inline constexpr StimulusPattern stimuli_for_inputs(bool a, bool b, bool invert_a,
                                                    bool invert_b) noexcept {
  return {a != invert_a, b != invert_b};
}

/// Ideal Boolean function of a kind, before input inversion.
inline constexpr bool ideal_gate_output(GateKind kind, bool a, bool b) noexcept {
  switch (kind) {
    case GateKind::OR: return a || b;
    case GateKind::AND: return a && b;
    case GateKind::NOT: return !a;
    case GateKind::NOR: return !(a || b);
    case GateKind::NAND: return !(a && b);
    case GateKind::XOR: return a != b;
    default: return a == b;  // XNOR
  }
}

/// Ideal output of a full GateSpec (inversion applied to the logic inputs).
inline constexpr bool ideal_gate_output(const GateSpec& spec, bool a, bool b) noexcept {
  return ideal_gate_output(spec.kind, a != spec.invert_a, b != spec.invert_b);
}

/// Evaluate one gate in sampled mode: the stimulus pattern implied by the
/// inputs selects the response distribution, one frequency change is drawn
/// and thresholded. NOT gates take their single input on A; b must be 0.
inline bool evaluate_gate(const GateSpec& spec, bool a, bool b, const ResponseModel& model,
                          Rng& rng) {
  if (is_single_input(spec.kind) && b)
    throw std::invalid_argument("NOT gate takes a single input; b must be 0");
  const StimulusPattern pattern = stimuli_for_inputs(a, b, spec.invert_a, spec.invert_b);
  return classify(sample_delta_f(pattern, model, rng), threshold_rule_for(spec.kind));
}

}  // namespace pfg
