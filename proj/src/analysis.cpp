#include "tpts/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "tpts/errors.hpp"
#include "tpts/modulator.hpp"

namespace tpts {

namespace {

// Number of samples spanning an integer number of 1/f1 periods, or 0.
size_t window_periods(size_t n, double dt, double f1) {
  const double periods = static_cast<double>(n) * dt * f1;
  const double rounded = std::round(periods);
  if (rounded < 1.0 || std::fabs(periods - rounded) > 1e-6 * std::max(1.0, rounded)) return 0;
  return static_cast<size_t>(rounded);
}

}  // namespace

SpectrumPoint fundamental(std::span<const double> samples, double dt, double f1) {
  if (window_periods(samples.size(), dt, f1) == 0)
    fail(errc::window, "window is not an integer number of fundamental periods");
  const double w = kTwoPi * f1 * dt;
  double re = 0.0, im = 0.0;
  for (size_t k = 0; k < samples.size(); ++k) {
    re += samples[k] * std::cos(w * static_cast<double>(k));
    im -= samples[k] * std::sin(w * static_cast<double>(k));
  }
  const double scale = 2.0 / static_cast<double>(samples.size());
  re *= scale;
  im *= scale;
  return {f1, std::hypot(re, im), std::atan2(im, re)};
}

double harmonic_amplitude(std::span<const double> samples, double dt, double f1, int h) {
  return fundamental(samples, dt, f1 * h).amplitude;
}

double thd(std::span<const double> samples, double dt, double f1, int n_harmonics) {
  if (n_harmonics < 2) fail(errc::domain, "thd needs at least the 2nd harmonic");
  const double fund = fundamental(samples, dt, f1).amplitude;
  double rms2 = 0.0;
  for (double x : samples) rms2 += x * x;
  rms2 /= static_cast<double>(samples.size());
  if (fund <= 1e-12 * std::sqrt(rms2))
    fail(errc::undefined_thd, "thd undefined: zero fundamental");
  const double nyquist = 0.5 / dt;
  double acc = 0.0;
  for (int h = 2; h <= n_harmonics; ++h) {
    if (h * f1 >= nyquist) break;
    const double amp = harmonic_amplitude(samples, dt, f1, h);
    acc += amp * amp;
  }
  return std::sqrt(acc) / fund;
}

double thd_total(std::span<const double> samples, double dt, double f1) {
  const SpectrumPoint f = fundamental(samples, dt, f1);
  if (f.amplitude <= 0.0) fail(errc::undefined_thd, "thd undefined: zero fundamental");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  double rms2 = 0.0;
  for (double x : samples) rms2 += (x - mean) * (x - mean);
  rms2 /= static_cast<double>(samples.size());
  const double fund2 = f.amplitude * f.amplitude / 2.0;
  return std::sqrt(std::max(0.0, rms2 - fund2)) / std::sqrt(fund2);
}

std::vector<double> per_period_average(std::span<const double> samples, double dt, double period) {
  const double per = period / dt;
  const long n_per = std::lround(per);
  if (n_per < 1 || std::fabs(per - static_cast<double>(n_per)) > 1e-6)
    fail(errc::window, "sampling is not commensurate with the period");
  std::vector<double> out;
  const size_t count = samples.size() / static_cast<size_t>(n_per);
  out.reserve(count);
  for (size_t p = 0; p < count; ++p) {
    const auto begin = samples.begin() + static_cast<long>(p) * n_per;
    out.push_back(std::accumulate(begin, begin + n_per, 0.0) / static_cast<double>(n_per));
  }
  return out;
}

ClampStats clamp_and_transition_stats(std::span<const SwitchingTimeline> timelines) {
  ClampStats stats;
  stats.max_transitions = {0, 0, 0};
  if (timelines.empty()) return stats;
  for (const SwitchingTimeline& tl : timelines) {
    const PhaseTriple on = gate_on_durations(tl);
    for (Phase p : {Phase::A, Phase::B, Phase::C}) {
      if (on[p] >= tl.period * (1.0 - 1e-12)) stats.clamp_fraction[p] += 1.0;
      const int edges = rising_edge_count(tl, p) + falling_edge_count(tl, p);
      auto& mx = stats.max_transitions[static_cast<size_t>(phase_index(p))];
      mx = std::max(mx, edges);
    }
  }
  const double n = static_cast<double>(timelines.size());
  stats.clamp_fraction = (1.0 / n) * stats.clamp_fraction;
  return stats;
}

namespace {

std::vector<double> channel(const std::vector<PhaseTriple>& v, Phase p, size_t from) {
  std::vector<double> out;
  out.reserve(v.size() - from);
  for (size_t i = from; i < v.size(); ++i) out.push_back(v[i][p]);
  return out;
}

}  // namespace

MetricsReport compute_metrics(const Trace& trace, const SimConfig& cfg, int discard_periods) {
  MetricsReport m;
  m.scheme = cfg.scheme;

  const double f1 = trace.f1;
  const size_t per_fund = static_cast<size_t>(std::lround(1.0 / (f1 * trace.dt)));
  const size_t discard = per_fund * static_cast<size_t>(discard_periods);
  if (trace.size() < discard + per_fund)
    fail(errc::window, "trace shorter than one fundamental period after the discard window");
  const size_t usable = (trace.size() - discard) / per_fund * per_fund;
  const size_t from = trace.size() - usable;  // keep whole fundamentals at the tail
  m.analyzed_periods = static_cast<int>(usable / per_fund);

  const double ts = cfg.switching_period();

  for (Phase p : {Phase::A, Phase::B, Phase::C}) {
    std::vector<double> i_src;
    i_src.reserve(usable);
    for (size_t i = from; i < trace.size(); ++i) i_src.push_back(trace.states[i].i_filter[p]);

    ChannelSpectrum cs;
    cs.fund = fundamental(i_src, trace.dt, f1);
    cs.thd_low = thd(i_src, trace.dt, f1, 50);
    const double mean = std::accumulate(i_src.begin(), i_src.end(), 0.0) / i_src.size();
    double rms2 = 0.0;
    for (double x : i_src) rms2 += (x - mean) * (x - mean);
    rms2 /= static_cast<double>(i_src.size());
    const double fund2 = cs.fund.amplitude * cs.fund.amplitude / 2.0;
    const double low2 = fund2 * (1.0 + cs.thd_low * cs.thd_low);
    cs.hf_residual = cs.fund.amplitude > 0.0
                         ? std::sqrt(std::max(0.0, rms2 - low2)) / (cs.fund.amplitude / std::sqrt(2.0))
                         : 0.0;
    m.source_current[static_cast<size_t>(phase_index(p))] = cs;

    const std::vector<double> ref = channel(trace.i_ref, p, from);
    m.reference[static_cast<size_t>(phase_index(p))] = fundamental(ref, trace.dt, f1);
  }

  // Tracking error: per-switching-period averages of the injected currents vs the
  // held references, rms over periods and phases.
  double track2 = 0.0;
  size_t track_n = 0;
  for (Phase p : {Phase::A, Phase::B, Phase::C}) {
    const std::vector<double> rect = channel(trace.i_rect, p, from);
    const std::vector<double> ref = channel(trace.i_ref, p, from);
    const std::vector<double> rect_avg = per_period_average(rect, trace.dt, ts);
    const std::vector<double> ref_avg = per_period_average(ref, trace.dt, ts);
    for (size_t i = 0; i < rect_avg.size(); ++i) {
      const double e = rect_avg[i] - ref_avg[i];
      track2 += e * e;
      ++track_n;
    }
  }
  m.tracking_error_rms = track_n ? std::sqrt(track2 / static_cast<double>(track_n)) : 0.0;

  // Gate statistics from the recorded gate samples, one timeline per switching period.
  const size_t per_ts = static_cast<size_t>(cfg.steps_per_period);
  std::vector<SwitchingTimeline> timelines;
  timelines.reserve(usable / per_ts);
  for (size_t p0 = from; p0 + per_ts <= trace.size(); p0 += per_ts) {
    SwitchingTimeline tl;
    tl.period = ts;
    for (size_t k = 0; k < per_ts; ++k) {
      const SwitchState s = trace.gates[p0 + k];
      if (!tl.segments.empty() && tl.segments.back().state == s)
        tl.segments.back().duration += trace.dt;
      else
        tl.segments.push_back({s, trace.dt});
    }
    timelines.push_back(std::move(tl));
  }
  const ClampStats cs = clamp_and_transition_stats(timelines);
  m.clamp_fraction = cs.clamp_fraction;
  m.transitions_per_period = cs.max_transitions;

  double i_dc_acc = 0.0, v_out_acc = 0.0, p_in_acc = 0.0, p_loss_acc = 0.0;
  for (size_t i = from; i < trace.size(); ++i) {
    const SimState& s = trace.states[i];
    i_dc_acc += s.i_dc;
    v_out_acc += s.v_out;
    for (Phase p : {Phase::A, Phase::B, Phase::C}) {
      p_in_acc += trace.v_grid[i][p] * s.i_filter[p];
      p_loss_acc += cfg.circuit.r_l_in * s.i_filter[p] * s.i_filter[p];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(usable);
  m.mean_i_dc = i_dc_acc * inv_n;
  m.mean_v_out = v_out_acc * inv_n;
  m.p_in = p_in_acc * inv_n;
  m.p_loss_r = p_loss_acc * inv_n;
  m.p_out = m.mean_v_out * cfg.load_current;

  m.op_counters = counted_cycle(cfg.scheme, {0.1, cfg.m, cfg.load_current, ts}).counters;
  return m;
}

std::string format_metrics(const MetricsReport& m) {
  std::ostringstream os;
  char buf[256];
  os << "scheme: " << scheme_name(m.scheme) << "\n";
  os << "analyzed fundamental periods: " << m.analyzed_periods << "\n\n";
  os << "source currents (grid side)\n";
  for (int i = 0; i < 3; ++i) {
    const ChannelSpectrum& cs = m.source_current[static_cast<size_t>(i)];
    const SpectrumPoint& ref = m.reference[static_cast<size_t>(i)];
    std::snprintf(buf, sizeof buf,
                  "  phase %c: fundamental %.4f A at %+.3f deg (reference %.4f A at %+.3f deg), "
                  "thd(h<=50) %.4f, hf residual %.4f\n",
                  "ABC"[i], cs.fund.amplitude, cs.fund.phase * 180.0 / kPi, ref.amplitude,
                  ref.phase * 180.0 / kPi, cs.thd_low, cs.hf_residual);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "\ntracking error rms: %.6f A\n", m.tracking_error_rms);
  os << buf;
  std::snprintf(buf, sizeof buf, "clamp fraction: A %.4f  B %.4f  C %.4f\n", m.clamp_fraction.a,
                m.clamp_fraction.b, m.clamp_fraction.c);
  os << buf;
  os << "max transitions per period: A " << m.transitions_per_period[0] << "  B "
     << m.transitions_per_period[1] << "  C " << m.transitions_per_period[2] << "\n";
  std::snprintf(buf, sizeof buf, "mean i_dc: %.4f A\nmean v_out: %.4f V\n", m.mean_i_dc,
                m.mean_v_out);
  os << buf;
  std::snprintf(buf, sizeof buf, "p_in: %.2f W  p_out: %.2f W  filter loss: %.2f W\n", m.p_in,
                m.p_out, m.p_loss_r);
  os << buf;
  const OpCounters& c = m.op_counters;
  os << "ops per control cycle: mult " << c.multiplications << ", add " << c.additions << ", sub "
     << c.subtractions << ", trig " << c.trig_evals << ", relational " << c.relational_ops
     << ", branches " << c.branches << ", lookups " << c.lookup_accesses << "\n";
  return os.str();
}

std::string resource_report(const std::array<OpCounters, 3>& per_scheme) {
  for (int i = 0; i < 2; ++i) {
    const OpCounters& c = per_scheme[static_cast<size_t>(i)];
    if (c.trig_evals != 0 || c.lookup_accesses != 0)
      fail(errc::domain, "carrier scheme reported trig or lookup-table usage");
  }
  std::ostringstream os;
  os << "operation            pattern1   pattern2        svm\n";
  const auto row = [&](const char* name, long OpCounters::* field) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-18s %10ld %10ld %10ld\n", name,
                  per_scheme[0].*field, per_scheme[1].*field, per_scheme[2].*field);
    os << buf;
  };
  row("multiplications", &OpCounters::multiplications);
  row("additions", &OpCounters::additions);
  row("subtractions", &OpCounters::subtractions);
  row("trig evals", &OpCounters::trig_evals);
  row("relational ops", &OpCounters::relational_ops);
  row("branches", &OpCounters::branches);
  row("table lookups", &OpCounters::lookup_accesses);
  return os.str();
}

}  // namespace tpts
