// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pfg/analysis.hpp"
#include "support/netlist_gen.hpp"
#include "support/oracles.hpp"

using namespace pfg;
using Catch::Approx;

namespace {
const ResponseModel kModel = ResponseModel::defaults();

// Frozen from the high-precision oracle (erf series / brute enumeration),
// computed before the implementation.
constexpr double kOrOverall = 0.8256588496;
constexpr double kAndOverall = 0.8348027069;
constexpr double kXorOverall = 0.6854144909;
constexpr double kNotOverall = 0.8705814010;
constexpr double kHalfAdderOverall = 0.5641632436;
constexpr double kFullAdderOverall = 0.3826885714;
constexpr double kDecoderOverall = 0.4684907131;
constexpr double kXorFromNandOverall = 0.5758494872;
}  // namespace

TEST_CASE("normal_cdf spot values") {
  CHECK(normal_cdf(0.0, 0.0, 1.0) == 0.5);
  CHECK(normal_cdf(1.0, 0.0, 1.0) == Approx(0.8413447460685429).margin(1e-7));
  CHECK(normal_cdf(3.0, 2.0, 1.0) == normal_cdf(1.0, 0.0, 1.0));
  // OR-gate correctness term for the no-stimulus pattern
  CHECK(normal_cdf(10.0, 2.1, 6.9) == Approx(0.8738804119).margin(1e-7));
  CHECK_THROWS_AS(normal_cdf(0.0, 0.0, 0.0), NonPositiveStd);
  CHECK_THROWS_AS(normal_cdf(0.0, 0.0, -1.0), NonPositiveStd);
}

TEST_CASE("normal_cdf tracks the series oracle") {
  long double worst = 0.0L;
  for (double z = -8.0; z <= 8.0; z += 0.05) {
    const long double err =
        std::fabs(static_cast<long double>(normal_cdf(z, 0.0, 1.0)) -
                  oracles::normal_cdf_oracle(static_cast<long double>(z)));
    worst = std::max(worst, err);
  }
  CHECK(static_cast<double>(worst) < 1e-7);
}

TEST_CASE("classification probabilities against published-threshold examples") {
  const auto or_rule = threshold_rule_for(GateKind::OR);
  const auto xor_rule = threshold_rule_for(GateKind::XOR);
  CHECK(classification_probability(or_rule, 33.2, 9.6) == Approx(0.9921683232).margin(1e-7));
  CHECK(classification_probability(xor_rule, 33.2, 9.6) == Approx(0.4486621587).margin(1e-7));
  // degenerate point mass
  CHECK(classification_probability(or_rule, 33.2, 0.0) == 1.0);
  CHECK(classification_probability(or_rule, 3.0, 0.0) == 0.0);
  CHECK(classification_probability(xor_rule, 5.0, 0.0) == 1.0);
}

TEST_CASE("classification probabilities match direct quadrature of the density") {
  for (GateKind k : {GateKind::OR, GateKind::AND, GateKind::NOT, GateKind::NOR, GateKind::NAND,
                     GateKind::XOR, GateKind::XNOR}) {
    const auto rule = threshold_rule_for(k);
    for (int i = 0; i < 4; ++i) {
      const auto& e = kModel.patterns[static_cast<std::size_t>(i)];
      const auto p = classification_probabilities(rule, e.mean_pct, e.std_pct);
      const double q = oracles::classification_probability_quadrature(rule, e.mean_pct, e.std_pct);
      CHECK(p.one == Approx(q).margin(1e-9));
      CHECK(p.one + p.zero == Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("analytic gate accuracy") {
  const auto or_rep = analytic_gate_accuracy(GateSpec{GateKind::OR}, kModel);
  CHECK(or_rep.overall == Approx(kOrOverall).margin(1e-9));
  REQUIRE(or_rep.per_input.size() == 4);
  CHECK(or_rep.per_input[0].first == "00");
  CHECK(or_rep.per_input[0].second == Approx(0.8738804119).margin(1e-9));
  CHECK(or_rep.overall == Approx(mean_of_per_input(or_rep.per_input)).margin(1e-15));

  CHECK(analytic_gate_accuracy(GateSpec{GateKind::AND}, kModel).overall ==
        Approx(kAndOverall).margin(1e-9));
  CHECK(analytic_gate_accuracy(GateSpec{GateKind::XOR}, kModel).overall ==
        Approx(kXorOverall).margin(1e-9));

  const auto not_rep = analytic_gate_accuracy(GateSpec{GateKind::NOT}, kModel);
  CHECK(not_rep.overall == Approx(kNotOverall).margin(1e-9));
  REQUIRE(not_rep.per_input.size() == 2);
  CHECK(not_rep.per_input[0].first == "0");
}

TEST_CASE("complemented kinds have bit-identical accuracy") {
  const std::pair<GateKind, GateKind> pairs[] = {{GateKind::NOR, GateKind::OR},
                                                 {GateKind::NAND, GateKind::AND},
                                                 {GateKind::XNOR, GateKind::XOR}};
  for (const auto& [complement, base] : pairs) {
    const auto c = analytic_gate_accuracy(GateSpec{complement}, kModel);
    const auto b = analytic_gate_accuracy(GateSpec{base}, kModel);
    CHECK(c.overall == b.overall);
    for (std::size_t i = 0; i < 4; ++i) CHECK(c.per_input[i].second == b.per_input[i].second);
  }
}

TEST_CASE("analytic circuit accuracy matches brute-force enumeration") {
  for (const auto& name : builtin_names()) {
    const Netlist n = builtin(name);
    const auto rep = analytic_circuit_accuracy(n, kModel);
    for (std::size_t c = 0; c < rep.per_input.size(); ++c) {
      const double brute =
          oracles::circuit_accuracy_brute(n, kModel, input_bits_for_combo(c, n.inputs.size()));
      INFO(name << " combo " << c);
      CHECK(rep.per_input[c].second == Approx(brute).margin(1e-9));
    }
  }
}

TEST_CASE("analytic circuit accuracy frozen values") {
  CHECK(analytic_circuit_accuracy(builtin("half_adder"), kModel).overall ==
        Approx(kHalfAdderOverall).margin(1e-8));
  CHECK(analytic_circuit_accuracy(builtin("full_adder"), kModel).overall ==
        Approx(kFullAdderOverall).margin(1e-8));
  CHECK(analytic_circuit_accuracy(builtin("xor_from_nand"), kModel).overall ==
        Approx(kXorFromNandOverall).margin(1e-8));
  const auto dec = analytic_circuit_accuracy(builtin("decoder_2to4"), kModel);
  CHECK(dec.overall == Approx(kDecoderOverall).margin(1e-8));
  // every input sees the same multiset of stimulus patterns across the 4 gates
  for (const auto& [key, p] : dec.per_input) CHECK(p == Approx(dec.per_input[0].second).margin(1e-15));
}

TEST_CASE("parallel one-level circuits factor into per-gate probabilities") {
  for (const char* name : {"half_adder", "decoder_2to4"}) {
    const Netlist n = builtin(name);
    const auto rep = analytic_circuit_accuracy(n, kModel);
    for (std::size_t c = 0; c < rep.per_input.size(); ++c) {
      const auto in = input_bits_for_combo(c, n.inputs.size());
      double product = 1.0;
      for (const auto& g : n.gates) {
        const bool a = in[g.source_a.name == "A" ? 0 : 1] != g.source_a.inverted;
        const bool b = in[g.source_b->name == "A" ? 0 : 1] != g.source_b->inverted;
        const auto pattern = stimuli_for_inputs(a, b, g.spec.invert_a, g.spec.invert_b);
        const auto& e = kModel.entry(pattern);
        const auto p = classification_probabilities(threshold_rule_for(g.spec.kind), e.mean_pct,
                                                    e.std_pct);
        product *= ideal_gate_output(g.spec.kind, a, b) ? p.one : p.zero;
      }
      INFO(name << " combo " << c);
      CHECK(rep.per_input[c].second == Approx(product).margin(1e-12));
    }
  }
}

TEST_CASE("enumerator matches brute force on generated netlists") {
  // exercises the live-wire marginalization against the exhaustive oracle
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 25; ++i) {
    const Netlist n = netgen::random_netlist(rng);
    const auto rep = analytic_circuit_accuracy(n, kModel);
    CHECK(rep.overall >= 0.0);
    CHECK(rep.overall <= 1.0);
    for (std::size_t c = 0; c < rep.per_input.size(); ++c) {
      const double brute =
          oracles::circuit_accuracy_brute(n, kModel, input_bits_for_combo(c, n.inputs.size()));
      INFO("netlist #" << i << " (" << serialize_netlist(n) << ") combo " << c);
      CHECK(rep.per_input[c].second == Approx(brute).margin(1e-9));
    }
  }
}

TEST_CASE("a single-gate netlist reproduces the gate report exactly") {
  for (GateKind k : {GateKind::OR, GateKind::AND, GateKind::XOR, GateKind::NOT}) {
    const GateSpec spec{k};
    const auto gate_rep = analytic_gate_accuracy(spec, kModel);
    const auto circ_rep = analytic_circuit_accuracy(gate_netlist(spec), kModel);
    CHECK(circ_rep.overall == gate_rep.overall);
    REQUIRE(circ_rep.per_input.size() == gate_rep.per_input.size());
    for (std::size_t i = 0; i < gate_rep.per_input.size(); ++i)
      CHECK(circ_rep.per_input[i].second == gate_rep.per_input[i].second);
  }
}

TEST_CASE("analytic enumeration is bounded") {
  Netlist n;
  n.name = "chain";
  n.inputs = {"A", "B"};
  std::string prev = "A";
  for (int i = 0; i < 25; ++i) {
    const std::string id = "g" + std::to_string(i);
    n.gates.push_back(GateInst{id, GateSpec{GateKind::OR}, {prev}, WireRef{"B"}});
    prev = id;
  }
  n.outputs = {{"Y", {prev}}};
  CHECK_THROWS_AS(analytic_circuit_accuracy(n, kModel), TooManyGates);
}

TEST_CASE("monte carlo: zero-noise model scores a perfect run") {
  const auto noiseless = kModel.with_std_scaled(0.0);
  const auto rep = monte_carlo_accuracy(builtin("full_adder"), noiseless, 200, 3);
  CHECK(rep.overall == 1.0);
  CHECK(rep.std_error == 0.0);
}

TEST_CASE("monte carlo converges on the analytic value") {
  const Netlist n = gate_netlist(GateSpec{GateKind::OR});
  const auto analytic = analytic_circuit_accuracy(n, kModel);
  const auto mc = monte_carlo_accuracy(n, kModel, 20000, 12345);
  CHECK(std::fabs(mc.overall - analytic.overall) <= 4.0 * mc.std_error);
  CHECK(mc.std_error ==
        Approx(std::sqrt(mc.overall * (1.0 - mc.overall) / 20000.0)).margin(1e-15));
}

TEST_CASE("monte carlo is bit-identical across worker counts and reruns") {
  const Netlist n = builtin("half_adder");
  const auto one = monte_carlo_accuracy(n, kModel, 5000, 99, 1);
  const auto four = monte_carlo_accuracy(n, kModel, 5000, 99, 4);
  const auto again = monte_carlo_accuracy(n, kModel, 5000, 99, 4);
  REQUIRE(one.per_input.size() == four.per_input.size());
  for (std::size_t i = 0; i < one.per_input.size(); ++i) {
    CHECK(one.per_input[i].second == four.per_input[i].second);
    CHECK(four.per_input[i].second == again.per_input[i].second);
  }
  CHECK(one.overall == four.overall);
  CHECK(one.std_error == four.std_error);
}

TEST_CASE("monte carlo trials reproduce the documented per-trial seeding") {
  const Netlist n = gate_netlist(GateSpec{GateKind::XOR});
  const std::uint64_t trials = 500, seed = 31;
  const auto rep = monte_carlo_accuracy(n, kModel, trials, seed, 2);
  for (std::size_t combo = 0; combo < rep.per_input.size(); ++combo) {
    const auto in = input_bits_for_combo(combo, n.inputs.size());
    const auto ideal = ideal_eval(n, in);
    std::uint64_t correct = 0;
    for (std::uint64_t t = 0; t < trials; ++t)
      if (evaluate_circuit(n, in, kModel, derive_seed(seed, combo, t)) == ideal) ++correct;
    CHECK(rep.per_input[combo].second == double(correct) / double(trials));
  }
}

TEST_CASE("table4 report carries the published values and counts") {
  const auto rows = table4_report(kModel, 2000, 5);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0].subject == "OR");
  CHECK(rows[0].paper_pct == 90.0);
  CHECK(rows[2].subject == "NOT");
  CHECK(rows[2].paper_reference_only);
  CHECK(rows[2].paper_pct == 91.7);
  CHECK(rows[5].subject == "full_adder");
  CHECK(rows[5].pfg_count == 5);
  CHECK(rows[6].subject == "decoder_2to4");
  CHECK(rows[6].paper_pct == 57.5);
  CHECK(rows[6].pfg_count == 4);

  // cumulative-error ordering of the analytic column
  const double half = rows[4].analytic.overall;
  for (int i : {0, 1, 2, 3}) CHECK(rows[static_cast<std::size_t>(i)].analytic.overall > half);
  CHECK(rows[5].analytic.overall < half);  // full adder
  CHECK(rows[6].analytic.overall < half);  // decoder
}
