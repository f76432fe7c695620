// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pfg/analysis.hpp"
#include "pfg/circuits.hpp"
#include "pfg/errors.hpp"
#include "pfg/signal.hpp"
#include "pfg/spectral.hpp"

namespace pfg {

using json = nlohmann::json;

namespace detail {

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Trace CSV + metadata sidecar

inline std::string default_meta_path(const std::string& trace_path) {
  return trace_path + ".meta.json";
}

inline void write_trace_csv(const std::string& path, const Trace& trace) {
  std::ostringstream os;
  os << "time_s,voltage_mv\n";
  for (std::size_t i = 0; i < trace.samples_mv.size(); ++i)
    os << detail::fixed(static_cast<double>(i) / trace.sample_rate_hz, 3) << ","
       << detail::fixed(trace.samples_mv[i]) << "\n";
  detail::write_file(path, os.str());
}

inline void write_trace_meta(const std::string& path, const Trace& trace) {
  json j;
  j["sample_rate_hz"] = trace.sample_rate_hz;
  j["stimulus_onset_index"] = trace.stimulus_onset_index;
  detail::write_file(path, j.dump(2) + "\n");
}

/// Read a logger-style trace export. Tolerates an optional header row, comma
/// or tab delimiters, and either (time, voltage) pairs or a bare voltage
/// column. Onset and sample rate come from explicit arguments, from the
/// sidecar metadata next to the file, or (rate only) from the time column.
inline Trace read_trace_csv(const std::string& path,
                            std::optional<std::size_t> onset_override = std::nullopt,
                            std::optional<double> rate_override = std::nullopt) {
  const std::string text = detail::read_file(path);

  std::optional<double> meta_rate;
  std::optional<std::size_t> meta_onset;
  const std::string meta_path = default_meta_path(path);
  if (std::filesystem::exists(meta_path)) {
    json j = json::parse(detail::read_file(meta_path), nullptr, true, true);
    if (j.contains("sample_rate_hz")) meta_rate = j["sample_rate_hz"].get<double>();
    if (j.contains("stimulus_onset_index"))
      meta_onset = j["stimulus_onset_index"].get<std::size_t>();
  }

  std::vector<double> times;
  std::vector<double> volts;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    for (char& ch : line)
      if (ch == '\t') ch = ',';
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.empty()) continue;
    std::vector<double> nums;
    bool numeric = true;
    for (const auto& s : fields) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(s, &used));
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        if (used != s.size()) numeric = false;
      } catch (...) {
        numeric = false;
      }
      if (!numeric) break;
    }
    if (!numeric) {
      if (volts.empty()) continue;  // header row
      throw ParseError("non-numeric row at line " + std::to_string(line_no) + " of '" + path +
                       "'");
    }
    if (nums.size() == 1) {
      volts.push_back(nums[0]);
    } else {
      times.push_back(nums[0]);
      volts.push_back(nums[1]);
    }
  }
  if (volts.size() < 2) throw ParseError("'" + path + "' holds no samples");

  Trace t;
  t.samples_mv = std::move(volts);
  if (rate_override) {
    t.sample_rate_hz = *rate_override;
  } else if (meta_rate) {
    t.sample_rate_hz = *meta_rate;
  } else if (times.size() >= 2 && times[1] > times[0]) {
    t.sample_rate_hz = 1.0 / (times[1] - times[0]);
  } else {
    t.sample_rate_hz = 1.0;
  }
  if (onset_override) {
    t.stimulus_onset_index = *onset_override;
  } else if (meta_onset) {
    t.stimulus_onset_index = *meta_onset;
  } else {
    throw ParseError("stimulus onset unknown: pass it explicitly or provide '" + meta_path + "'");
  }
  if (t.stimulus_onset_index == 0 || t.stimulus_onset_index >= t.samples_mv.size())
    throw ParseError("stimulus onset index " + std::to_string(t.stimulus_onset_index) +
                     " does not split the " + std::to_string(t.samples_mv.size()) +
                     "-sample trace");
  return t;
}

// ---------------------------------------------------------------------------
// Response model JSON: {"patterns": {"00": {"mean_pct": .., "std_pct": ..}, ..}}
// Keys are (heat, oat) bits.

inline std::string pattern_key(StimulusPattern p) {
  return std::string{p.heat ? '1' : '0', p.oat ? '1' : '0'};
}

inline json response_model_to_json(const ResponseModel& model) {
  json patterns = json::object();
  for (int i = 0; i < 4; ++i) {
    const auto p = StimulusPattern::from_index(i);
    patterns[pattern_key(p)] = {{"mean_pct", model.entry(p).mean_pct},
                                {"std_pct", model.entry(p).std_pct}};
  }
  return json{{"patterns", patterns}};
}

inline ResponseModel response_model_from_json(const json& j) {
  if (!j.contains("patterns") || !j["patterns"].is_object())
    throw ParseError("response model: missing 'patterns' object");
  ResponseModel m;
  for (int i = 0; i < 4; ++i) {
    const auto p = StimulusPattern::from_index(i);
    const std::string key = pattern_key(p);
    if (!j["patterns"].contains(key))
      throw ParseError("response model: missing pattern '" + key + "'");
    const json& e = j["patterns"][key];
    if (!e.contains("mean_pct") || !e.contains("std_pct"))
      throw ParseError("response model: pattern '" + key + "' needs mean_pct and std_pct");
    m.entry(p) = {e["mean_pct"].get<double>(), e["std_pct"].get<double>()};
  }
  m.validate();
  return m;
}

inline ResponseModel load_response_model(const std::string& path) {
  json j;
  try {
    j = json::parse(detail::read_file(path), nullptr, true, true);
  } catch (const json::exception& e) {
    throw ParseError("response model '" + path + "': " + e.what());
  }
  return response_model_from_json(j);
}

// ---------------------------------------------------------------------------
// Analysis record

inline json analysis_to_json(const DeltaFAnalysis& a) {
  return json{{"f_pre_hz", a.pre.freq_hz},
              {"f_post_hz", a.post.freq_hz},
              {"delta_f_pct", a.delta_f_pct},
              {"window_s", a.window_s},
              {"method", "dft-quadratic"}};
}

// ---------------------------------------------------------------------------
// Accuracy reports

inline json accuracy_report_to_json(const AccuracyReport& rep) {
  json per = json::object();
  for (const auto& [key, p] : rep.per_input) per[key] = p;
  json j{{"subject", rep.subject},
         {"method", std::string(to_string(rep.method))},
         {"per_input", per},
         {"overall", rep.overall}};
  if (rep.method == AccuracyMethod::monte_carlo) {
    j["trials"] = rep.trials;
    j["std_error"] = rep.std_error;
  }
  return j;
}

inline std::string accuracy_report_to_csv(const AccuracyReport& rep) {
  std::ostringstream os;
  os << "subject,method,trials,input,p_correct,overall,std_error\n";
  for (const auto& [key, p] : rep.per_input)
    os << rep.subject << "," << to_string(rep.method) << "," << rep.trials << "," << key << ","
       << detail::fixed(p) << "," << detail::fixed(rep.overall) << ","
       << detail::fixed(rep.std_error) << "\n";
  return os.str();
}

inline std::string table4_to_csv(const std::vector<Table4Row>& rows) {
  std::ostringstream os;
  os << "subject,pfg_count,paper_pct,analytic_pct,mc_pct,mc_stderr\n";
  for (const auto& r : rows)
    os << r.subject << "," << r.pfg_count << "," << detail::fixed(r.paper_pct, 2) << ","
       << detail::fixed(r.analytic.overall * 100.0, 4) << ","
       << detail::fixed(r.monte_carlo.overall * 100.0, 4) << ","
       << detail::fixed(r.monte_carlo.std_error * 100.0, 4) << "\n";
  return os.str();
}

inline json table4_to_json(const std::vector<Table4Row>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"subject", r.subject},
                   {"pfg_count", r.pfg_count},
                   {"paper_pct", r.paper_pct},
                   {"paper_reference_only", r.paper_reference_only},
                   {"analytic", accuracy_report_to_json(r.analytic)},
                   {"monte_carlo", accuracy_report_to_json(r.monte_carlo)}});
  }
  return arr;
}

// ---------------------------------------------------------------------------
// Truth table CSV: input columns then output columns, one row per combination.

inline std::string truth_table_to_csv(const TruthTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.input_names.size(); ++i) {
    if (i) os << ",";
    os << t.input_names[i];
  }
  for (const auto& name : t.output_names) os << "," << name;
  os << "\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto bits = input_bits_for_combo(r, t.num_inputs);
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (i) os << ",";
      os << (bits[i] ? 1 : 0);
    }
    for (bool b : t.rows[r]) os << "," << (b ? 1 : 0);
    os << "\n";
  }
  return os.str();
}

}  // namespace pfg
