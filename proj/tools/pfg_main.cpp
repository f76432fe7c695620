// SPDX-License-Identifier: Apache-2.0
//
// pfg — simulate frequency-change logic gates and circuits: synthesize
// stimulus-perturbed oscillatory traces, recover the frequency shift,
// classify it into Boolean outputs, cascade gates into netlists, and report
// gate/circuit accuracy analytically and by Monte Carlo.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pfg/pfg.hpp"

namespace {

using namespace pfg;

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::usage: return 2;
    case ErrorCategory::analysis: return 3;
    case ErrorCategory::capacity: return 4;
  }
  return 1;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

GateKind parse_kind_or_throw(const std::string& s) {
  GateKind k;
  if (!try_parse_gate_kind(s, k))
    throw ParseError("unknown gate kind '" + s + "' (use OR, AND, NOT, NOR, NAND, XOR, XNOR)");
  return k;
}

StimulusPattern parse_pattern(const std::string& s) {
  if (s == "none") return {false, false};
  if (s == "oat") return {false, true};
  if (s == "heat") return {true, false};
  if (s == "heat+oat" || s == "oat+heat") return {true, true};
  throw ParseError("unknown stimulus pattern '" + s + "' (none, oat, heat, heat+oat)");
}

std::vector<bool> parse_input_bits(const std::string& s) {
  std::vector<bool> bits;
  for (char c : s) {
    if (c != '0' && c != '1') throw ParseError("inputs must be a bit string, got '" + s + "'");
    bits.push_back(c == '1');
  }
  return bits;
}

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::uint64_t trials = 100000;
  std::string response_model_path;
  std::string format;  // per-command default when empty
  int threads = 0;
};

ResponseModel load_model(const GlobalOptions& g, double std_scale = 1.0) {
  ResponseModel m = g.response_model_path.empty() ? ResponseModel::defaults()
                                                  : load_response_model(g.response_model_path);
  return std_scale == 1.0 ? m : m.with_std_scaled(std_scale);
}

std::string pick_format(const GlobalOptions& g, const std::string& fallback) {
  return g.format.empty() ? fallback : g.format;
}

void print_warnings(const OscillationModel& osc) {
  for (const auto& w : plausibility_warnings(osc)) std::cerr << "warning: " << w << "\n";
}

// --- trace synth -----------------------------------------------------------

struct TraceSynthArgs {
  OscillationModel osc;
  std::string pattern;
  std::optional<double> delta_f;
  double pre_s = 600.0;
  double post_s = 600.0;
  std::string out;
  std::string meta;
};

int run_trace_synth(const TraceSynthArgs& a, const GlobalOptions& g) {
  print_warnings(a.osc);
  if (a.pattern.empty() == !a.delta_f)
    throw ParseError("pass exactly one of --pattern or --delta-f");
  Rng rng(g.seed);
  double delta = 0.0;
  if (a.delta_f) {
    delta = *a.delta_f;
  } else {
    delta = sample_delta_f(parse_pattern(a.pattern), load_model(g), rng);
  }
  const Trace trace = synthesize_trace(a.osc, delta, a.pre_s, a.post_s, rng);
  write_trace_csv(a.out, trace);
  const std::string meta = a.meta.empty() ? default_meta_path(a.out) : a.meta;
  write_trace_meta(meta, trace);
  std::cout << "wrote " << trace.samples_mv.size() << " samples to " << a.out << " (onset "
            << trace.stimulus_onset_index << ", delta_f " << fixed(delta, 4) << "%)\n";
  return 0;
}

// --- trace analyze ----------------------------------------------------------

struct TraceAnalyzeArgs {
  std::string in;
  std::optional<std::size_t> onset;
  std::optional<double> rate;
  double window_s = kDefaultWindowS;
  SpectralConfig cfg;
  std::string gate;
  bool invert_a = false;
  bool invert_b = false;
};

int run_trace_analyze(const TraceAnalyzeArgs& a, const GlobalOptions& g) {
  const Trace trace = read_trace_csv(a.in, a.onset, a.rate);
  const DeltaFAnalysis analysis = analyze_delta_f(trace, a.cfg, a.window_s);
  json j = analysis_to_json(analysis);
  if (!a.gate.empty()) {
    const GateKind kind = parse_kind_or_throw(a.gate);
    j["gate"] = a.gate;
    j["output"] = classify(analysis.delta_f_pct, threshold_rule_for(kind)) ? 1 : 0;
  }
  const std::string format = pick_format(g, "json");
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "f_pre_hz=" << fixed(analysis.pre.freq_hz, 9)
              << " f_post_hz=" << fixed(analysis.post.freq_hz, 9)
              << " delta_f_pct=" << fixed(analysis.delta_f_pct, 4) << "\n";
    if (j.contains("output")) std::cout << a.gate << "=" << j["output"].get<int>() << "\n";
  }
  return 0;
}

// --- gate run ---------------------------------------------------------------

struct GateRunArgs {
  std::string gate;
  int in_a = 0;
  int in_b = 0;
  bool invert_a = false;
  bool invert_b = false;
  std::string mode = "sampled";
  double noise_scale = 1.0;
  OscillationModel osc;
};

int run_gate(const GateRunArgs& a, const GlobalOptions& g) {
  const GateSpec spec{parse_kind_or_throw(a.gate), a.invert_a, a.invert_b};
  const ResponseModel model = load_model(g, a.noise_scale);
  Rng rng(g.seed);
  bool out;
  if (a.mode == "measured") {
    print_warnings(a.osc);
    out = evaluate_gate_measured(spec, a.in_a != 0, a.in_b != 0, model, a.osc, rng);
  } else {
    out = evaluate_gate(spec, a.in_a != 0, a.in_b != 0, model, rng);
  }
  if (pick_format(g, "text") == "json") {
    std::cout << json{{"gate", a.gate}, {"a", a.in_a}, {"b", a.in_b}, {"output", out ? 1 : 0}}
                     .dump()
              << "\n";
  } else {
    std::cout << (out ? 1 : 0) << "\n";
  }
  return 0;
}

// --- circuit run / check ----------------------------------------------------

Netlist load_netlist(const std::string& builtin_name, const std::string& path) {
  if (builtin_name.empty() == path.empty())
    throw ParseError("pass exactly one of --builtin or --netlist");
  if (!builtin_name.empty()) return builtin(builtin_name);
  return parse_netlist(pfg::detail::read_file(path));
}

struct CircuitRunArgs {
  std::string builtin_name;
  std::string netlist_path;
  std::string inputs;
  std::string mode = "sampled";
  double noise_scale = 1.0;
  OscillationModel osc;
};

int run_circuit(const CircuitRunArgs& a, const GlobalOptions& g) {
  const Netlist n = load_netlist(a.builtin_name, a.netlist_path);
  const std::vector<bool> bits = parse_input_bits(a.inputs);
  const ResponseModel model = load_model(g, a.noise_scale);
  std::vector<bool> out;
  if (a.mode == "measured") {
    print_warnings(a.osc);
    out = evaluate_circuit_measured(n, bits, model, a.osc, g.seed);
  } else {
    out = evaluate_circuit(n, bits, model, g.seed);
  }
  if (pick_format(g, "text") == "json") {
    json outputs = json::object();
    std::string bit_string;
    for (std::size_t i = 0; i < out.size(); ++i) {
      outputs[n.outputs[i].first] = out[i] ? 1 : 0;
      bit_string += out[i] ? '1' : '0';
    }
    std::cout << json{{"circuit", n.name}, {"inputs", a.inputs}, {"outputs", outputs},
                      {"bits", bit_string}}
                     .dump()
              << "\n";
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i) std::cout << " ";
      std::cout << n.outputs[i].first << "=" << (out[i] ? 1 : 0);
    }
    std::cout << "\n";
  }
  return 0;
}

struct CircuitCheckArgs {
  std::string builtin_name;
  std::string netlist_path;
  bool table = false;
  bool canonical = false;
};

int run_circuit_check(const CircuitCheckArgs& a) {
  const Netlist n = load_netlist(a.builtin_name, a.netlist_path);
  std::cout << "circuit " << n.name << ": " << n.inputs.size() << " inputs, " << n.gates.size()
            << " gates, " << n.outputs.size() << " outputs\n";
  if (a.canonical) std::cout << serialize_netlist(n);
  if (a.table) std::cout << truth_table_to_csv(ideal_truth_table(n));
  return 0;
}

// --- accuracy ----------------------------------------------------------------

struct AccuracyArgs {
  std::string gate;
  bool invert_a = false;
  bool invert_b = false;
  std::string builtin_name;
  std::string netlist_path;
  std::string method = "both";
};

void print_report_text(const AccuracyReport& rep) {
  std::cout << rep.subject << " " << to_string(rep.method) << ": overall "
            << fixed(rep.overall * 100.0, 4) << "%";
  if (rep.method == AccuracyMethod::monte_carlo)
    std::cout << " (trials " << rep.trials << ", stderr " << fixed(rep.std_error * 100.0, 4)
              << "pp)";
  std::cout << "\n";
  for (const auto& [key, p] : rep.per_input)
    std::cout << "  " << key << ": " << fixed(p * 100.0, 4) << "%\n";
}

int run_accuracy(const AccuracyArgs& a, const GlobalOptions& g) {
  const int subjects = int(!a.gate.empty()) + int(!a.builtin_name.empty()) +
                       int(!a.netlist_path.empty());
  if (subjects != 1) throw ParseError("pass exactly one of --gate, --builtin, or --netlist");
  if (a.method != "analytic" && a.method != "mc" && a.method != "both")
    throw ParseError("--method must be analytic, mc, or both");

  const ResponseModel model = load_model(g);
  Netlist n;
  std::optional<AccuracyReport> analytic;
  if (!a.gate.empty()) {
    const GateSpec spec{parse_kind_or_throw(a.gate), a.invert_a, a.invert_b};
    n = gate_netlist(spec);
    if (a.method != "mc") analytic = analytic_gate_accuracy(spec, model);
  } else {
    n = load_netlist(a.builtin_name, a.netlist_path);
    if (a.method != "mc") analytic = analytic_circuit_accuracy(n, model);
  }
  std::optional<AccuracyReport> mc;
  if (a.method != "analytic")
    mc = monte_carlo_accuracy(n, model, g.trials, g.seed, g.threads);

  const std::string format = pick_format(g, "text");
  if (format == "json") {
    json j = json::object();
    if (analytic) j["analytic"] = accuracy_report_to_json(*analytic);
    if (mc) j["monte_carlo"] = accuracy_report_to_json(*mc);
    std::cout << j.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "subject,method,trials,input,p_correct,overall,std_error\n";
    for (const auto* rep : {analytic ? &*analytic : nullptr, mc ? &*mc : nullptr}) {
      if (!rep) continue;
      for (const auto& [key, p] : rep->per_input)
        std::cout << rep->subject << "," << to_string(rep->method) << "," << rep->trials << ","
                  << key << "," << fixed(p) << "," << fixed(rep->overall) << ","
                  << fixed(rep->std_error) << "\n";
    }
  } else {
    if (analytic) print_report_text(*analytic);
    if (mc) print_report_text(*mc);
  }
  return 0;
}

int run_table4(const GlobalOptions& g) {
  const auto rows = table4_report(load_model(g), g.trials, g.seed, g.threads);
  const std::string format = pick_format(g, "text");
  if (format == "json") {
    std::cout << table4_to_json(rows).dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << table4_to_csv(rows);
  } else {
    std::printf("%-14s %5s %9s %12s %10s %10s\n", "subject", "pfgs", "paper%", "analytic%",
                "mc%", "mc_stderr");
    for (const auto& r : rows) {
      std::printf("%-14s %5d %8.2f%s %11.4f %10.4f %10.4f\n", r.subject.c_str(), r.pfg_count,
                  r.paper_pct, r.paper_reference_only ? "*" : " ",
                  r.analytic.overall * 100.0, r.monte_carlo.overall * 100.0,
                  r.monte_carlo.std_error * 100.0);
    }
    std::printf("* published figure for reference; its model parameters are external\n");
  }
  return 0;
}

void add_osc_options(CLI::App* cmd, OscillationModel& osc, bool trace_noise_name) {
  cmd->add_option("--period", osc.base_period_s, "base oscillation period, seconds");
  cmd->add_option("--amplitude", osc.amplitude_mv, "oscillation amplitude, mV");
  cmd->add_option(trace_noise_name ? "--trace-noise" : "--noise", osc.noise_std_mv,
                  "additive white noise std, mV");
  cmd->add_option("--dc", osc.dc_offset_mv, "DC offset, mV");
  cmd->add_option("--rate", osc.sample_rate_hz, "sample rate, Hz");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency-gate logic simulator"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "random seed (fixed default keeps runs reproducible)");
  app.add_option("--trials", g.trials, "Monte Carlo trials per input combination");
  app.add_option("--response-model", g.response_model_path,
                 "JSON response model overriding the built-in table");
  app.add_option("--format", g.format, "output format: text, json, or csv");
  app.add_option("--threads", g.threads, "worker threads for Monte Carlo (0 = auto)");

  auto* trace = app.add_subcommand("trace", "synthesize and analyze voltage traces");
  trace->require_subcommand(1);

  TraceSynthArgs synth_args;
  auto* synth = trace->add_subcommand("synth", "write a synthetic trace CSV + metadata");
  add_osc_options(synth, synth_args.osc, false);
  synth->add_option("--pattern", synth_args.pattern,
                    "stimulus pattern (none, oat, heat, heat+oat); draws delta-f from the model");
  double delta_f_opt = 0.0;
  auto* delta_opt = synth->add_option("--delta-f", delta_f_opt, "injected frequency change, percent");
  synth->add_option("--pre", synth_args.pre_s, "baseline window, seconds");
  synth->add_option("--post", synth_args.post_s, "response window, seconds");
  synth->add_option("--out", synth_args.out, "output CSV path")->required();
  synth->add_option("--meta", synth_args.meta, "metadata JSON path (default: <out>.meta.json)");

  TraceAnalyzeArgs analyze_args;
  auto* analyze = trace->add_subcommand("analyze", "estimate f_pre, f_post and delta-f");
  analyze->add_option("--in", analyze_args.in, "trace CSV path")->required();
  std::size_t onset_opt = 0;
  auto* onset_flag = analyze->add_option("--onset", onset_opt, "stimulus onset sample index");
  double rate_opt = 0.0;
  auto* rate_flag = analyze->add_option("--rate", rate_opt, "sample rate override, Hz");
  analyze->add_option("--window", analyze_args.window_s, "analysis window per side, seconds");
  analyze->add_option("--zero-pad", analyze_args.cfg.zero_pad_factor, "zero-padding factor");
  analyze->add_option("--band-lo", analyze_args.cfg.band_lo_hz, "search band low edge, Hz");
  analyze->add_option("--band-hi", analyze_args.cfg.band_hi_hz, "search band high edge, Hz");
  analyze->add_option("--gate", analyze_args.gate, "classify delta-f with this gate kind");

  GateRunArgs gate_args;
  auto* gate = app.add_subcommand("gate", "evaluate single gates");
  auto* gate_run = gate->add_subcommand("run", "evaluate one gate on logic inputs");
  gate_run->add_option("--gate", gate_args.gate, "gate kind")->required();
  gate_run->add_option("--in-a", gate_args.in_a, "logic input A (0 or 1)");
  gate_run->add_option("--in-b", gate_args.in_b, "logic input B (0 or 1)");
  gate_run->add_flag("--invert-a", gate_args.invert_a, "apply stimulus A when input A is 0");
  gate_run->add_flag("--invert-b", gate_args.invert_b, "apply stimulus B when input B is 0");
  gate_run->add_option("--mode", gate_args.mode, "sampled or measured");
  gate_run->add_option("--noise", gate_args.noise_scale,
                       "scale factor on the response stds (0 = ideal)");
  add_osc_options(gate_run, gate_args.osc, true);

  auto* circuit = app.add_subcommand("circuit", "evaluate and validate netlists");
  circuit->require_subcommand(1);

  CircuitRunArgs circuit_args;
  auto* circuit_run = circuit->add_subcommand("run", "cascade a circuit on an input vector");
  circuit_run->add_option("--builtin", circuit_args.builtin_name, "builtin circuit name");
  circuit_run->add_option("--netlist", circuit_args.netlist_path, "netlist DSL file");
  circuit_run->add_option("--inputs", circuit_args.inputs, "input bit string, e.g. 110")
      ->required();
  circuit_run->add_option("--mode", circuit_args.mode, "sampled or measured");
  circuit_run->add_option("--noise", circuit_args.noise_scale,
                          "scale factor on the response stds (0 = ideal)");
  add_osc_options(circuit_run, circuit_args.osc, true);

  CircuitCheckArgs check_args;
  auto* circuit_check = circuit->add_subcommand("check", "validate a netlist");
  circuit_check->add_option("--builtin", check_args.builtin_name, "builtin circuit name");
  circuit_check->add_option("--netlist", check_args.netlist_path, "netlist DSL file");
  circuit_check->add_flag("--table", check_args.table, "print the ideal truth table as CSV");
  circuit_check->add_flag("--canonical", check_args.canonical, "print the canonical DSL text");

  AccuracyArgs acc_args;
  auto* accuracy = app.add_subcommand("accuracy", "gate/circuit accuracy reports");
  accuracy->add_option("--gate", acc_args.gate, "gate kind");
  accuracy->add_flag("--invert-a", acc_args.invert_a, "invert input A");
  accuracy->add_flag("--invert-b", acc_args.invert_b, "invert input B");
  accuracy->add_option("--builtin", acc_args.builtin_name, "builtin circuit name");
  accuracy->add_option("--netlist", acc_args.netlist_path, "netlist DSL file");
  accuracy->add_option("--method", acc_args.method, "analytic, mc, or both");
  auto* table4 = accuracy->add_subcommand("table4", "published-vs-model comparison report");

  // let the global options (--seed, --format, ...) appear after any subcommand
  for (CLI::App* sub : {trace, synth, analyze, gate, gate_run, circuit, circuit_run,
                        circuit_check, accuracy, table4})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) {
      if (*delta_opt) synth_args.delta_f = delta_f_opt;
      return run_trace_synth(synth_args, g);
    }
    if (analyze->parsed()) {
      if (*onset_flag) analyze_args.onset = onset_opt;
      if (*rate_flag) analyze_args.rate = rate_opt;
      return run_trace_analyze(analyze_args, g);
    }
    if (gate_run->parsed()) return run_gate(gate_args, g);
    if (circuit_run->parsed()) return run_circuit(circuit_args, g);
    if (circuit_check->parsed()) return run_circuit_check(check_args);
    if (accuracy->parsed()) {
      if (table4->parsed()) return run_table4(g);
      return run_accuracy(acc_args, g);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
