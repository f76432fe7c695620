// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "pfg/errors.hpp"
#include "pfg/rng.hpp"

namespace pfg {

/// Which of the two stimuli are applied. Heat carries logic input A, the oat
/// flake carries logic input B, so the four patterns map onto the four 2-bit
/// input combinations.
struct StimulusPattern {
  bool heat = false;
  bool oat = false;

  constexpr int index() const noexcept { return (heat ? 2 : 0) + (oat ? 1 : 0); }
  static constexpr StimulusPattern from_index(int i) noexcept {
    return {(i & 2) != 0, (i & 1) != 0};
  }
  friend constexpr bool operator==(StimulusPattern, StimulusPattern) = default;
};

inline std::string to_string(StimulusPattern p) {
  switch (p.index()) {
    case 0: return "none";
    case 1: return "oat";
    case 2: return "heat";
    default: return "heat+oat";
  }
}

/// Gaussian model of the percent frequency change each stimulus pattern
/// provokes. One entry per pattern, indexed by StimulusPattern::index().
struct ResponseModel {
  struct Entry {
    double mean_pct = 0.0;
    double std_pct = 0.0;
  };
  std::array<Entry, 4> patterns{};

  const Entry& entry(StimulusPattern p) const noexcept { return patterns[p.index()]; }
  Entry& entry(StimulusPattern p) noexcept { return patterns[p.index()]; }

  /// Measured medians/stds: none (2.1, 6.9), oat (12.2, 12.6),
  /// heat (19.8, 8.8), heat+oat (33.2, 9.6).
  static ResponseModel defaults() {
    ResponseModel m;
    m.patterns[StimulusPattern{false, false}.index()] = {2.1, 6.9};
    m.patterns[StimulusPattern{false, true}.index()] = {12.2, 12.6};
    m.patterns[StimulusPattern{true, false}.index()] = {19.8, 8.8};
    m.patterns[StimulusPattern{true, true}.index()] = {33.2, 9.6};
    return m;
  }

  ResponseModel with_std_scaled(double factor) const {
    ResponseModel m = *this;
    for (auto& e : m.patterns) e.std_pct *= factor;
    return m;
  }

  void validate() const {
    for (int i = 0; i < 4; ++i) {
      if (!(patterns[i].std_pct >= 0.0))
        throw ParseError("response model: std_pct must be >= 0 for pattern " +
                         to_string(StimulusPattern::from_index(i)));
      if (!std::isfinite(patterns[i].mean_pct) || !std::isfinite(patterns[i].std_pct))
        throw ParseError("response model: non-finite parameter for pattern " +
                         to_string(StimulusPattern::from_index(i)));
    }
  }

  friend bool operator==(const ResponseModel& a, const ResponseModel& b) {
    for (int i = 0; i < 4; ++i)
      if (a.patterns[i].mean_pct != b.patterns[i].mean_pct ||
          a.patterns[i].std_pct != b.patterns[i].std_pct)
        return false;
    return true;
  }
};

/// Shape of the synthetic electrode-potential oscillation.
struct OscillationModel {
  double base_period_s = 100.0;
  double amplitude_mv = 10.0;
  double noise_std_mv = 0.0;
  double dc_offset_mv = 0.0;
  double sample_rate_hz = 1.0;
};

/// Physiological-plausibility warnings. Out-of-band parameters are allowed;
/// callers decide whether to surface these.
inline std::vector<std::string> plausibility_warnings(const OscillationModel& osc) {
  std::vector<std::string> w;
  if (osc.base_period_s < 60.0 || osc.base_period_s > 200.0)
    w.push_back("base period " + std::to_string(osc.base_period_s) +
                " s is outside the physiological 60-200 s band");
  if (std::abs(osc.dc_offset_mv) + osc.amplitude_mv > 39.0)
    w.push_back("|dc offset| + amplitude exceeds the 39 mV recording range");
  return w;
}

/// A recorded (or synthesized) voltage time series with a marked stimulus
/// onset. Samples before the onset index form the baseline window.
struct Trace {
  std::vector<double> samples_mv;
  double sample_rate_hz = 1.0;
  std::size_t stimulus_onset_index = 0;
};

/// Draw a percent frequency change for the given stimulus pattern.
/// Deterministic given the engine state; std 0 collapses to the mean.
inline double sample_delta_f(StimulusPattern pattern, const ResponseModel& model, Rng& rng) {
  const auto& e = model.entry(pattern);
  return sample_normal(rng, e.mean_pct, e.std_pct);
}

// The oscillation must stay periodic even for extreme negative draws.
inline constexpr double kMinPostFrequencyHz = 0.0005;  // 0.5 mHz

/// Synthesize a trace whose oscillation frequency steps from 1/base_period to
/// (1 + delta_f_pct/100) times that at stimulus onset. The phase is continuous
/// across the step; white Gaussian noise and the DC offset are added on top.
inline Trace synthesize_trace(const OscillationModel& osc, double delta_f_pct,
                              double pre_duration_s, double post_duration_s, Rng& rng) {
  if (!(pre_duration_s > 0.0) || !(post_duration_s > 0.0))
    throw InvalidDuration("window durations must be positive");
  if (!(osc.sample_rate_hz > 0.0)) throw InvalidDuration("sample rate must be positive");
  if (pre_duration_s < 2.0 * osc.base_period_s || post_duration_s < 2.0 * osc.base_period_s)
    throw InvalidDuration("each window must hold at least 2 cycles at the base period (" +
                          std::to_string(2.0 * osc.base_period_s) + " s)");

  const double f_pre = 1.0 / osc.base_period_s;
  const double f_post = std::max(f_pre * (1.0 + delta_f_pct / 100.0), kMinPostFrequencyHz);
  const auto n_pre = static_cast<std::size_t>(std::llround(pre_duration_s * osc.sample_rate_hz));
  const auto n_post = static_cast<std::size_t>(std::llround(post_duration_s * osc.sample_rate_hz));
  const double t_onset = static_cast<double>(n_pre) / osc.sample_rate_hz;

  constexpr double two_pi = 2.0 * std::numbers::pi;
  Trace trace;
  trace.sample_rate_hz = osc.sample_rate_hz;
  trace.stimulus_onset_index = n_pre;
  trace.samples_mv.resize(n_pre + n_post);
  for (std::size_t i = 0; i < trace.samples_mv.size(); ++i) {
    const double t = static_cast<double>(i) / osc.sample_rate_hz;
    const double phase = (t < t_onset) ? two_pi * f_pre * t
                                       : two_pi * (f_pre * t_onset + f_post * (t - t_onset));
    double v = osc.dc_offset_mv + osc.amplitude_mv * std::sin(phase);
    if (osc.noise_std_mv > 0.0) v += sample_normal(rng, 0.0, osc.noise_std_mv);
    trace.samples_mv[i] = v;
  }
  return trace;
}

}  // namespace pfg
