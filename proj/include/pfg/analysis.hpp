// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "pfg/circuits.hpp"
#include "pfg/errors.hpp"
#include "pfg/gates.hpp"
#include "pfg/rng.hpp"
#include "pfg/signal.hpp"

namespace pfg {

namespace detail {

// Lower/upper standard-normal tails, each computed directly from erfc so the
// small one keeps full relative accuracy.
inline double std_normal_lower(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double std_normal_upper(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace detail

/// Phi((x - mean) / std).
inline double normal_cdf(double x, double mean, double std) {
  if (!(std > 0.0)) throw NonPositiveStd("normal_cdf requires std > 0");
  return detail::std_normal_lower((x - mean) / std);
}

/// P(output = 1) and P(output = 0) for one rule applied to one response
/// distribution. Both tails are computed directly (not as 1 - other), so a
/// complemented rule yields the exact same pair swapped.
struct OutcomeProbs {
  double one = 0.0;
  double zero = 0.0;
};

inline OutcomeProbs classification_probabilities(const ThresholdRule& rule, double pattern_mean,
                                                 double pattern_std) {
  if (pattern_std < 0.0) throw NonPositiveStd("pattern std must be >= 0");
  if (pattern_std == 0.0) {
    const bool one = classify(pattern_mean, rule);
    return one ? OutcomeProbs{1.0, 0.0} : OutcomeProbs{0.0, 1.0};
  }
  if (rule.shape == ThresholdRule::Shape::single) {
    const double z = (rule.threshold_pct - pattern_mean) / pattern_std;
    const double above = detail::std_normal_upper(z);
    const double below = detail::std_normal_lower(z);
    return rule.high_when_above ? OutcomeProbs{above, below} : OutcomeProbs{below, above};
  }
  const double z_lo = (rule.lo_pct - pattern_mean) / pattern_std;
  const double z_hi = (rule.hi_pct - pattern_mean) / pattern_std;
  const double inside =
      std::max(0.0, detail::std_normal_lower(z_hi) - detail::std_normal_lower(z_lo));
  const double outside = detail::std_normal_lower(z_lo) + detail::std_normal_upper(z_hi);
  return rule.one_inside ? OutcomeProbs{inside, outside} : OutcomeProbs{outside, inside};
}

inline double classification_probability(const ThresholdRule& rule, double pattern_mean,
                                         double pattern_std) {
  return classification_probabilities(rule, pattern_mean, pattern_std).one;
}

enum class AccuracyMethod { analytic, monte_carlo };

inline constexpr std::string_view to_string(AccuracyMethod m) noexcept {
  return m == AccuracyMethod::analytic ? "analytic" : "monte_carlo";
}

/// Per-input-combination probability that every declared output is correct,
/// plus the uniform average over combinations.
struct AccuracyReport {
  std::string subject;
  AccuracyMethod method = AccuracyMethod::analytic;
  std::vector<std::pair<std::string, double>> per_input;  // combo key -> P(correct)
  double overall = 0.0;
  std::uint64_t trials = 0;  // Monte Carlo only
  double std_error = 0.0;    // Monte Carlo only
};

inline double mean_of_per_input(const std::vector<std::pair<std::string, double>>& per_input) {
  double sum = 0.0;
  for (const auto& [key, p] : per_input) sum += p;
  return sum / static_cast<double>(per_input.size());
}

/// Exact accuracy of a single gate: for each logic input combination, the
/// probability that one thresholded draw matches the ideal output.
inline AccuracyReport analytic_gate_accuracy(const GateSpec& spec, const ResponseModel& model) {
  AccuracyReport rep;
  rep.subject = std::string(to_string(spec.kind));
  rep.method = AccuracyMethod::analytic;
  const ThresholdRule rule = threshold_rule_for(spec.kind);
  const std::size_t num_inputs = is_single_input(spec.kind) ? 1 : 2;
  const std::size_t combos = std::size_t{1} << num_inputs;
  for (std::size_t c = 0; c < combos; ++c) {
    const auto bits = input_bits_for_combo(c, num_inputs);
    const bool a = bits[0];
    const bool b = num_inputs == 2 ? bits[1] : false;
    const StimulusPattern pattern = stimuli_for_inputs(a, b, spec.invert_a, spec.invert_b);
    const auto& e = model.entry(pattern);
    const OutcomeProbs p = classification_probabilities(rule, e.mean_pct, e.std_pct);
    const bool ideal = ideal_gate_output(spec, a, b);
    rep.per_input.push_back({combo_key(c, num_inputs), ideal ? p.one : p.zero});
  }
  rep.overall = mean_of_per_input(rep.per_input);
  return rep;
}

inline constexpr std::size_t kMaxAnalyticGates = 24;

/// Exact circuit accuracy by propagating the joint distribution of gate
/// outputs through the DAG in topological order. Wires with no remaining
/// readers are marginalized out as soon as possible, so the live state stays
/// small for series-parallel circuits. This is the reference the Monte Carlo
/// estimate is checked against.
inline AccuracyReport analytic_circuit_accuracy(const Netlist& n, const ResponseModel& model) {
  if (n.gates.size() > kMaxAnalyticGates)
    throw TooManyGates("analytic enumeration supports at most " +
                       std::to_string(kMaxAnalyticGates) + " gates, netlist has " +
                       std::to_string(n.gates.size()));
  if (n.inputs.size() > kMaxTruthTableInputs)
    throw TooManyGates("accuracy enumeration supports at most " +
                       std::to_string(kMaxTruthTableInputs) + " inputs");
  const detail::CompiledNetlist c(n);
  const std::size_t num_gates = c.gates.size();
  const std::size_t num_inputs = c.num_inputs;

  // Last gate that reads each gate-output slot; declared outputs stay live.
  constexpr std::size_t kKeep = static_cast<std::size_t>(-1);
  std::vector<std::size_t> last_reader(num_gates, 0);
  auto note_read = [&](std::size_t slot, std::size_t reader) {
    if (slot >= num_inputs) last_reader[slot - num_inputs] = std::max(last_reader[slot - num_inputs], reader);
  };
  for (std::size_t g = 0; g < num_gates; ++g) {
    note_read(c.gates[g].a_slot, g);
    if (!c.gates[g].single) note_read(c.gates[g].b_slot, g);
  }
  for (const auto& [slot, inv] : c.outputs)
    if (slot >= num_inputs) last_reader[slot - num_inputs] = kKeep;

  // Per-gate outcome probabilities for each realized (a, b) value pair.
  std::vector<std::array<OutcomeProbs, 4>> gate_probs(num_gates);
  for (std::size_t g = 0; g < num_gates; ++g) {
    const auto& cg = c.gates[g];
    const ThresholdRule rule = threshold_rule_for(cg.spec.kind);
    for (int ab = 0; ab < 4; ++ab) {
      const StimulusPattern pattern =
          stimuli_for_inputs((ab & 2) != 0, (ab & 1) != 0, cg.spec.invert_a, cg.spec.invert_b);
      const auto& e = model.entry(pattern);
      gate_probs[g][static_cast<std::size_t>(ab)] =
          classification_probabilities(rule, e.mean_pct, e.std_pct);
    }
  }

  AccuracyReport rep;
  rep.subject = n.name;
  rep.method = AccuracyMethod::analytic;

  const std::size_t combos = std::size_t{1} << num_inputs;
  for (std::size_t combo = 0; combo < combos; ++combo) {
    const std::vector<bool> in_bits = input_bits_for_combo(combo, num_inputs);
    const std::vector<bool> ideal_outs = ideal_eval(n, in_bits);

    // live[i] = gate index whose output occupies state bit i.
    std::vector<std::size_t> live;
    std::map<std::uint64_t, double> state{{0, 1.0}};

    auto live_bit = [&](std::size_t gate_index) {
      const auto it = std::find(live.begin(), live.end(), gate_index);
      return static_cast<std::size_t>(it - live.begin());
    };

    for (std::size_t g = 0; g < num_gates; ++g) {
      const auto& cg = c.gates[g];
      const bool a_const = cg.a_slot < num_inputs;
      const bool b_const = cg.single || cg.b_slot < num_inputs;
      const std::size_t a_bit = a_const ? 0 : live_bit(cg.a_slot - num_inputs);
      const std::size_t b_bit = b_const ? 0 : live_bit(cg.b_slot - num_inputs);

      std::map<std::uint64_t, double> next;
      const std::size_t out_bit = live.size();
      for (const auto& [key, prob] : state) {
        const bool a_val =
            (a_const ? in_bits[cg.a_slot] : ((key >> a_bit) & 1u) != 0) != cg.a_inv;
        const bool b_val = cg.single ? false
                                     : ((b_const ? in_bits[cg.b_slot]
                                                 : ((key >> b_bit) & 1u) != 0) != cg.b_inv);
        const auto& p = gate_probs[g][(a_val ? 2u : 0u) + (b_val ? 1u : 0u)];
        if (p.zero > 0.0) next[key] += prob * p.zero;
        if (p.one > 0.0) next[key | (std::uint64_t{1} << out_bit)] += prob * p.one;
      }
      live.push_back(g);

      // Marginalize wires nobody downstream reads.
      std::vector<std::size_t> kept;
      for (std::size_t i = 0; i < live.size(); ++i)
        if (last_reader[live[i]] == kKeep || last_reader[live[i]] > g) kept.push_back(i);
      if (kept.size() != live.size()) {
        std::map<std::uint64_t, double> reduced;
        for (const auto& [key, prob] : next) {
          std::uint64_t nk = 0;
          for (std::size_t i = 0; i < kept.size(); ++i)
            nk |= ((key >> kept[i]) & 1u) << i;
          reduced[nk] += prob;
        }
        next = std::move(reduced);
        std::vector<std::size_t> new_live;
        for (std::size_t i : kept) new_live.push_back(live[i]);
        live = std::move(new_live);
      }
      state = std::move(next);
    }

    double correct = 0.0;
    for (const auto& [key, prob] : state) {
      bool all_ok = true;
      for (std::size_t o = 0; o < c.outputs.size(); ++o) {
        const auto& [slot, inv] = c.outputs[o];
        const bool val = (slot < num_inputs ? in_bits[slot]
                                            : ((key >> live_bit(slot - num_inputs)) & 1u) != 0) !=
                         inv;
        if (val != ideal_outs[o]) {
          all_ok = false;
          break;
        }
      }
      if (all_ok) correct += prob;
    }
    rep.per_input.push_back({combo_key(combo, num_inputs), correct});
  }
  rep.overall = mean_of_per_input(rep.per_input);
  return rep;
}

inline int resolve_thread_count(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

/// Seeded Monte Carlo accuracy: `trials` circuit evaluations per input
/// combination. Each trial's seed is a pure function of (seed, combination,
/// trial index), so the report is bit-identical for any worker count.
inline AccuracyReport monte_carlo_accuracy(const Netlist& n, const ResponseModel& model,
                                           std::uint64_t trials, std::uint64_t seed,
                                           int threads = 0) {
  if (trials < 1) throw std::invalid_argument("monte_carlo_accuracy requires trials >= 1");
  if (n.inputs.size() > kMaxTruthTableInputs)
    throw TooManyGates("accuracy enumeration supports at most " +
                       std::to_string(kMaxTruthTableInputs) + " inputs");
  const detail::CompiledNetlist c(n);
  const std::size_t combos = std::size_t{1} << c.num_inputs;
  const int workers = resolve_thread_count(threads);

  AccuracyReport rep;
  rep.subject = n.name;
  rep.method = AccuracyMethod::monte_carlo;
  rep.trials = trials;

  for (std::size_t combo = 0; combo < combos; ++combo) {
    const std::vector<bool> in_bits = input_bits_for_combo(combo, c.num_inputs);
    const std::vector<bool> ideal_outs = ideal_eval(n, in_bits);

    auto count_range = [&](std::uint64_t t_begin, std::uint64_t t_end) {
      std::uint64_t correct = 0;
      std::vector<bool> wires(c.num_inputs + c.gates.size());
      for (std::uint64_t t = t_begin; t < t_end; ++t) {
        for (std::size_t i = 0; i < c.num_inputs; ++i) wires[i] = in_bits[i];
        c.run_trial(wires, model, derive_seed(seed, combo, t));
        bool ok = true;
        for (std::size_t o = 0; o < c.outputs.size(); ++o) {
          const auto& [slot, inv] = c.outputs[o];
          if ((wires[slot] != inv) != ideal_outs[o]) {
            ok = false;
            break;
          }
        }
        if (ok) ++correct;
      }
      return correct;
    };

    std::uint64_t correct = 0;
    if (workers == 1) {
      correct = count_range(0, trials);
    } else {
      std::vector<std::uint64_t> partial(static_cast<std::size_t>(workers), 0);
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        const std::uint64_t b = trials * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
        const std::uint64_t e = trials * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(workers);
        pool.emplace_back([&, w, b, e] { partial[static_cast<std::size_t>(w)] = count_range(b, e); });
      }
      for (auto& th : pool) th.join();
      for (std::uint64_t p : partial) correct += p;
    }
    rep.per_input.push_back({combo_key(combo, c.num_inputs),
                             static_cast<double>(correct) / static_cast<double>(trials)});
  }
  rep.overall = mean_of_per_input(rep.per_input);
  rep.std_error = std::sqrt(rep.overall * (1.0 - rep.overall) / static_cast<double>(trials));
  return rep;
}

/// Single-gate wrapper netlist, used to run gates through the circuit
/// machinery (Monte Carlo, reports).
inline Netlist gate_netlist(const GateSpec& spec) {
  Netlist n;
  n.name = std::string(to_string(spec.kind));
  if (is_single_input(spec.kind)) {
    n.inputs = {"A"};
    n.gates = {GateInst{"g1", spec, WireRef{"A"}, std::nullopt}};
  } else {
    n.inputs = {"A", "B"};
    n.gates = {GateInst{"g1", spec, WireRef{"A"}, WireRef{"B"}}};
  }
  n.outputs = {{"Y", WireRef{"g1"}}};
  return n;
}

/// One row of the published-accuracy comparison.
struct Table4Row {
  std::string subject;
  int pfg_count = 0;
  double paper_pct = 0.0;
  bool paper_reference_only = false;  // NOT: published figure, parameters external
  AccuracyReport analytic;
  AccuracyReport monte_carlo;
};

/// Side-by-side report for OR, AND, NOT, XOR, half adder, full adder and the
/// 2-4 decoder: published accuracy, Gaussian-model analytic accuracy, and a
/// seeded Monte Carlo estimate.
inline std::vector<Table4Row> table4_report(const ResponseModel& model, std::uint64_t trials,
                                            std::uint64_t seed, int threads = 0) {
  struct Spec {
    std::string subject;
    int pfg_count;
    double paper_pct;
    bool reference_only;
  };
  const std::vector<Spec> rows = {
      {"OR", 1, 90.0, false},         {"AND", 1, 77.8, false}, {"NOT", 1, 91.7, true},
      {"XOR", 1, 70.8, false},        {"half_adder", 2, 65.0, false},
      {"full_adder", 5, 58.8, false}, {"decoder_2to4", 4, 57.5, false},
  };
  std::vector<Table4Row> out;
  for (const auto& r : rows) {
    Table4Row row;
    row.subject = r.subject;
    row.pfg_count = r.pfg_count;
    row.paper_pct = r.paper_pct;
    row.paper_reference_only = r.reference_only;
    GateKind kind;
    if (try_parse_gate_kind(r.subject, kind)) {
      const GateSpec spec{kind};
      row.analytic = analytic_gate_accuracy(spec, model);
      row.monte_carlo = monte_carlo_accuracy(gate_netlist(spec), model, trials, seed, threads);
    } else {
      const Netlist n = builtin(r.subject);
      row.analytic = analytic_circuit_accuracy(n, model);
      row.monte_carlo = monte_carlo_accuracy(n, model, trials, seed, threads);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace pfg
