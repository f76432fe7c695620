// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pfg/detail/fft.hpp"
#include "pfg/errors.hpp"
#include "pfg/signal.hpp"

namespace pfg {

enum class WindowFunction { rectangular, hann };

/// Tuning of the dominant-frequency estimator. The default search band covers
/// the physiological oscillation range of 60-200 s periods; the raw DFT bin
/// width of a 600-sample window (1.67 mHz) is far too coarse for percent-level
/// frequency changes, so the spectrum is zero-padded and the peak refined by
/// quadratic interpolation.
struct SpectralConfig {
  WindowFunction window_function = WindowFunction::hann;
  int zero_pad_factor = 8;
  double band_lo_hz = 1.0 / 200.0;
  double band_hi_hz = 1.0 / 60.0;
  double min_peak_snr = 3.0;  // peak over the median in-band magnitude
};

struct FrequencyEstimate {
  double freq_hz = 0.0;
  double peak_magnitude = 0.0;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
};

/// Full result of a pre/post trace analysis.
struct DeltaFAnalysis {
  FrequencyEstimate pre;
  FrequencyEstimate post;
  double delta_f_pct = 0.0;
  double window_s = 0.0;
};

inline constexpr std::size_t kMinEstimateSamples = 64;

// Default analysis window, matching the 10-minute baseline/response periods.
inline constexpr double kDefaultWindowS = 600.0;

// The post window is searched in a band scaled around the pre-window
// frequency so that large shifts (both signs) stay inside the search range.
inline constexpr double kPostBandLoFactor = 0.35;
inline constexpr double kPostBandHiFactor = 2.2;

/// Estimate the dominant oscillation frequency of a sample window.
///
/// The window is mean-removed, tapered, zero-padded to a power of two at
/// least zero_pad_factor times the window length, and transformed; the
/// largest in-band magnitude is refined by three-point quadratic
/// interpolation on log magnitude.
///
/// Throws TooShort for windows under kMinEstimateSamples and
/// NoOscillationDetected when the in-band peak fails the SNR gate.
inline FrequencyEstimate estimate_dominant_frequency(std::span<const double> samples,
                                                     double sample_rate_hz,
                                                     const SpectralConfig& cfg) {
  if (samples.size() < kMinEstimateSamples)
    throw TooShort("window has " + std::to_string(samples.size()) + " samples, need at least " +
                   std::to_string(kMinEstimateSamples));
  if (!(sample_rate_hz > 0.0)) throw TooShort("sample rate must be positive");
  if (!(cfg.band_lo_hz < cfg.band_hi_hz))
    throw TooShort("search band is empty (lo >= hi)");
  const int pad = std::max(cfg.zero_pad_factor, 1);

  const std::size_t n = samples.size();
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(n);

  double max_dev = 0.0;
  for (double v : samples) max_dev = std::max(max_dev, std::abs(v - mean));
  if (max_dev <= std::max(std::abs(mean), 1.0) * 1e-12)
    throw NoOscillationDetected("window is constant to machine precision");

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0;
    if (cfg.window_function == WindowFunction::hann)
      w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n - 1)));
    x[i] = (samples[i] - mean) * w;
  }

  const std::size_t nfft = detail::next_pow2(n * static_cast<std::size_t>(pad));
  const std::vector<double> mag = detail::magnitude_spectrum(x, nfft);
  const double bin_hz = sample_rate_hz / static_cast<double>(nfft);

  // Peak bins need both neighbours for interpolation.
  const std::size_t k_min = 1;
  const std::size_t k_max = nfft / 2 - 1;
  auto k_lo = static_cast<std::size_t>(std::ceil(cfg.band_lo_hz / bin_hz));
  auto k_hi = static_cast<std::size_t>(std::floor(cfg.band_hi_hz / bin_hz));
  k_lo = std::clamp(k_lo, k_min, k_max);
  k_hi = std::clamp(k_hi, k_min, k_max);
  if (k_lo > k_hi) throw NoOscillationDetected("search band holds no DFT bins");

  std::size_t k_peak = k_lo;
  for (std::size_t k = k_lo + 1; k <= k_hi; ++k)
    if (mag[k] > mag[k_peak]) k_peak = k;
  const double peak = mag[k_peak];

  std::vector<double> band(mag.begin() + static_cast<std::ptrdiff_t>(k_lo),
                           mag.begin() + static_cast<std::ptrdiff_t>(k_hi) + 1);
  std::nth_element(band.begin(), band.begin() + static_cast<std::ptrdiff_t>(band.size() / 2),
                   band.end());
  const double median = band[band.size() / 2];

  if (!(peak > 0.0) || (median > 0.0 && peak / median < cfg.min_peak_snr))
    throw NoOscillationDetected("in-band peak fails the SNR gate (peak " + std::to_string(peak) +
                                ", median " + std::to_string(median) + ")");

  // Three-point quadratic interpolation on log magnitude.
  double delta = 0.0;
  const double lo = mag[k_peak - 1], mid = mag[k_peak], hi = mag[k_peak + 1];
  if (lo > 0.0 && hi > 0.0) {
    const double a = std::log(lo), b = std::log(mid), c = std::log(hi);
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }

  FrequencyEstimate est;
  est.freq_hz = std::clamp((static_cast<double>(k_peak) + delta) * bin_hz, cfg.band_lo_hz,
                           cfg.band_hi_hz);
  est.peak_magnitude = peak;
  est.band_lo_hz = cfg.band_lo_hz;
  est.band_hi_hz = cfg.band_hi_hz;
  return est;
}

/// Estimate the baseline and response frequencies around the stimulus onset
/// and report the percent change (f_post / f_pre - 1) x 100.
///
/// Each side uses up to window_s seconds of samples adjacent to the onset.
inline DeltaFAnalysis analyze_delta_f(const Trace& trace, const SpectralConfig& cfg,
                                      double window_s = kDefaultWindowS) {
  const std::size_t onset = trace.stimulus_onset_index;
  if (onset == 0 || onset >= trace.samples_mv.size())
    throw TooShort("stimulus onset index must split the trace into two windows");
  const auto want = static_cast<std::size_t>(std::llround(window_s * trace.sample_rate_hz));
  const std::size_t n_pre = std::min(onset, want);
  const std::size_t n_post = std::min(trace.samples_mv.size() - onset, want);
  const std::span<const double> all(trace.samples_mv);

  DeltaFAnalysis out;
  out.window_s = window_s;
  try {
    out.pre = estimate_dominant_frequency(all.subspan(onset - n_pre, n_pre),
                                          trace.sample_rate_hz, cfg);
  } catch (const NoOscillationDetected& e) {
    throw NoOscillationDetected(std::string(e.what()) + " [pre window]", "pre");
  }

  SpectralConfig post_cfg = cfg;
  post_cfg.band_lo_hz = out.pre.freq_hz * kPostBandLoFactor;
  post_cfg.band_hi_hz =
      std::min(out.pre.freq_hz * kPostBandHiFactor, 0.999 * trace.sample_rate_hz / 2.0);
  try {
    out.post =
        estimate_dominant_frequency(all.subspan(onset, n_post), trace.sample_rate_hz, post_cfg);
  } catch (const NoOscillationDetected& e) {
    throw NoOscillationDetected(std::string(e.what()) + " [post window]", "post");
  }

  out.delta_f_pct = (out.post.freq_hz / out.pre.freq_hz - 1.0) * 100.0;
  return out;
}

inline double compute_delta_f(const Trace& trace, const SpectralConfig& cfg,
                              double window_s = kDefaultWindowS) {
  return analyze_delta_f(trace, cfg, window_s).delta_f_pct;
}

}  // namespace pfg
