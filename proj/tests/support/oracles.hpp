// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations. These deliberately avoid the library's
// own code paths (std::erfc, the FFT, the marginalizing enumerator) so they
// can serve as independent checks.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pfg/circuits.hpp"
#include "pfg/gates.hpp"
#include "pfg/signal.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// Standard normal CDF from an erf power series (small |x|) and a Lentz
// continued fraction for erfc (large x), in long double.

inline long double erf_series(long double x) {
  // erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
  const long double two_over_sqrt_pi = 1.128379167095512573896158903121545172L;
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-25L * std::fabs(sum)) break;
  }
  return two_over_sqrt_pi * sum;
}

inline long double erfc_continued_fraction(long double x) {
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...))))
  const long double sqrt_pi = 1.772453850905516027298167483341145183L;
  long double f = x;  // modified Lentz, b_n = x, a_n = n/2
  long double c = f;
  long double d = 0.0L;
  for (int n = 1; n < 400; ++n) {
    const long double a = n / 2.0L;
    d = x + a * d;
    if (d == 0.0L) d = 1e-30L;
    c = x + a / c;
    if (c == 0.0L) c = 1e-30L;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-22L) break;
  }
  return std::exp(-x * x) / (sqrt_pi * f);
}

inline long double erfc_oracle(long double x) {
  if (x < 0) return 2.0L - erfc_oracle(-x);
  if (x < 2.5L) return 1.0L - erf_series(x);
  return erfc_continued_fraction(x);
}

inline long double normal_cdf_oracle(long double z) {
  const long double sqrt2 = 1.414213562373095048801688724209698079L;
  return erfc_oracle(-z / sqrt2) / 2.0L;
}

// ---------------------------------------------------------------------------
// P(output = 1) by adaptive-Simpson integration of the Gaussian density over
// the rule's acceptance region (tails truncated at 12 sigma).

inline double normal_pdf(double x, double mean, double std) {
  const double z = (x - mean) / std;
  return std::exp(-0.5 * z * z) / (std * std::sqrt(2.0 * M_PI));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, eps / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, eps / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, f(a), f(m), f(b), 1e-13, 48);
}

inline double classification_probability_quadrature(const pfg::ThresholdRule& rule, double mean,
                                                    double std) {
  if (std == 0.0) return pfg::classify(mean, rule) ? 1.0 : 0.0;
  auto pdf = [&](double x) { return normal_pdf(x, mean, std); };
  const double lo_inf = mean - 12.0 * std;
  const double hi_inf = mean + 12.0 * std;
  if (rule.shape == pfg::ThresholdRule::Shape::single) {
    const double above = integrate(pdf, std::max(rule.threshold_pct, lo_inf), hi_inf);
    return rule.high_when_above ? above : 1.0 - above;
  }
  const double inside = integrate(pdf, std::max(rule.lo_pct, lo_inf), std::min(rule.hi_pct, hi_inf));
  return rule.one_inside ? inside : 1.0 - inside;
}

// ---------------------------------------------------------------------------
// Brute-force circuit accuracy: enumerate every joint gate-outcome vector.

inline double circuit_accuracy_brute(const pfg::Netlist& n, const pfg::ResponseModel& model,
                                     const std::vector<bool>& in_bits) {
  const std::vector<bool> ideal = pfg::ideal_eval(n, in_bits);
  const std::size_t g_count = n.gates.size();

  // P(output 1) per gate for each realized input-value pair
  std::vector<std::array<double, 4>> p_one(g_count);
  for (std::size_t g = 0; g < g_count; ++g) {
    const auto& inst = n.gates[g];
    for (int ab = 0; ab < 4; ++ab) {
      const auto pattern = pfg::stimuli_for_inputs((ab & 2) != 0, (ab & 1) != 0,
                                                   inst.spec.invert_a, inst.spec.invert_b);
      const auto& e = model.entry(pattern);
      p_one[g][static_cast<std::size_t>(ab)] = classification_probability_quadrature(
          pfg::threshold_rule_for(inst.spec.kind), e.mean_pct, e.std_pct);
    }
  }

  double total = 0.0;
  for (std::size_t outcome = 0; outcome < (std::size_t{1} << g_count); ++outcome) {
    std::map<std::string, bool> wires;
    for (std::size_t i = 0; i < in_bits.size(); ++i) wires[n.inputs[i]] = in_bits[i];
    double p = 1.0;
    for (std::size_t g = 0; g < g_count; ++g) {
      const auto& inst = n.gates[g];
      const bool a = wires.at(inst.source_a.name) != inst.source_a.inverted;
      const bool b =
          inst.source_b ? (wires.at(inst.source_b->name) != inst.source_b->inverted) : false;
      const double p1 = p_one[g][(a ? 2u : 0u) + (b ? 1u : 0u)];
      const bool bit = ((outcome >> g) & 1u) != 0;
      p *= bit ? p1 : 1.0 - p1;
      wires[inst.id] = bit;
    }
    bool ok = true;
    for (std::size_t o = 0; o < n.outputs.size(); ++o)
      if ((wires.at(n.outputs[o].second.name) != n.outputs[o].second.inverted) != ideal[o]) {
        ok = false;
        break;
      }
    if (ok) total += p;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Naive O(n^2) DFT magnitude for one bin.

inline double naive_dft_magnitude(const std::vector<double>& x, std::size_t nfft, std::size_t k) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ang = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(i) /
                       static_cast<double>(nfft);
    acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return std::abs(acc);
}

}  // namespace oracles
