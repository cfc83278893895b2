#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "tpts/simulator.hpp"
#include "tpts/types.hpp"

namespace tpts {

struct SpectrumPoint {
  double frequency = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;  // radians, cosine convention
};

// Single-bin Fourier projection over an integer number of periods of f1; exact
// for tones commensurate with the window.
SpectrumPoint fundamental(std::span<const double> samples, double dt, double f1);

// Amplitude of harmonic h*f1 (h = 1 is the fundamental).
double harmonic_amplitude(std::span<const double> samples, double dt, double f1, int h);

// sqrt(sum of harmonic amplitudes squared) / fundamental, harmonics 2..n_harmonics.
double thd(std::span<const double> samples, double dt, double f1, int n_harmonics = 50);

// All non-fundamental rms content (mean removed) relative to the fundamental rms.
double thd_total(std::span<const double> samples, double dt, double f1);

// One average per `period` per channel; sampling must be commensurate.
std::vector<double> per_period_average(std::span<const double> samples, double dt, double period);

struct ClampStats {
  PhaseTriple clamp_fraction;          // fraction of periods with the gate high throughout
  std::array<int, 3> max_transitions;  // most rising+falling edges seen in any period
};
ClampStats clamp_and_transition_stats(std::span<const SwitchingTimeline> timelines);

struct ChannelSpectrum {
  SpectrumPoint fund;
  double thd_low = 0.0;      // harmonics 2..50 of the fundamental
  double hf_residual = 0.0;  // rms content above the low band, relative to the fundamental
};

struct MetricsReport {
  std::array<ChannelSpectrum, 3> source_current;  // phases A, B, C
  std::array<SpectrumPoint, 3> reference;         // same projection of the references
  double tracking_error_rms = 0.0;                // per-period avg i_rect vs reference, amperes
  PhaseTriple clamp_fraction;
  std::array<int, 3> transitions_per_period{};
  double mean_i_dc = 0.0;
  double mean_v_out = 0.0;
  double p_in = 0.0;
  double p_out = 0.0;
  double p_loss_r = 0.0;  // filter-resistance loss
  OpCounters op_counters;
  Scheme scheme = Scheme::pattern_i;
  int analyzed_periods = 0;  // fundamental periods in the analysis window
};

// Metrics over the trace with the first `discard_periods` fundamentals dropped.
MetricsReport compute_metrics(const Trace& trace, const SimConfig& cfg, int discard_periods = 1);

std::string format_metrics(const MetricsReport& m);

// Side-by-side counter table; refuses counters claiming trig or table lookups
// for a carrier scheme.
std::string resource_report(const std::array<OpCounters, 3>& per_scheme);

}  // namespace tpts
