#include "tpts/modulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "tpts/errors.hpp"

namespace tpts {

SwitchState SwitchingTimeline::state_at(double t) const {
  double acc = 0.0;
  for (const Segment& seg : segments) {
    acc += seg.duration;
    if (t < acc) return seg.state;
  }
  return segments.empty() ? kStateNone : segments.back().state;
}

double SwitchingTimeline::total_duration() const {
  double acc = 0.0;
  for (const Segment& seg : segments) acc += seg.duration;
  return acc;
}

namespace {

void check_ontime_inputs(const AbsOrdering& ord, double ts, double i_dc) {
  if (ts <= 0.0) fail(errc::domain, "switching period must be positive");
  if (i_dc <= 0.0) fail(errc::invalid_dc, "dc-link current must be positive");
  if (ord.max_val > i_dc)
    fail(errc::overmodulation, "|I_max| = " + std::to_string(ord.max_val) +
                                   " exceeds I_DC = " + std::to_string(i_dc));
}

// Tiny negative dwell from roundoff at subsector boundaries is clamped to zero;
// anything larger means the location does not match the references.
double checked_dwell(double t, double ts, const char* which) {
  if (t < -1e-12 * ts)
    fail(errc::sector_mismatch, std::string("negative dwell ") + which + " = " + std::to_string(t));
  return t < 0.0 ? 0.0 : t;
}

}  // namespace

OnTimes ontimes_pattern1(const AbsOrdering& ord, double ts, double i_dc) {
  check_ontime_inputs(ord, ts, i_dc);
  const double scale = ts / i_dc;
  OnTimes on;
  on[ord.max_phase] = ord.max_val * scale;
  on[ord.mid_phase] = ord.mid_val * scale;
  on[ord.min_phase] = ts;
  on.clamped_phase = ord.min_phase;
  return on;
}

OnTimes ontimes_pattern2(const AbsOrdering& ord, double ts, double i_dc) {
  check_ontime_inputs(ord, ts, i_dc);
  const double scale = ts / i_dc;
  OnTimes on;
  on[ord.max_phase] = ord.max_val * scale;
  on[ord.mid_phase] = ord.mid_val * scale;
  on[ord.min_phase] = ord.max_val * scale;
  on.clamped_phase = std::nullopt;
  return on;
}

namespace {

// Active vector I_1 sits at the sector's lower edge and pairs the extremum phase
// with the phase that is min-abs in half b; I_2 at the upper edge pairs it with
// the half-a min-abs phase.
Phase vector1_partner(int sector) { return min_abs_phase(sector, Half::b); }
Phase vector2_partner(int sector) { return min_abs_phase(sector, Half::a); }

}  // namespace

DwellTimes dwell_times_from_currents(const PhaseTriple& refs, const SectorLocation& loc,
                                     double ts, double i_dc) {
  if (ts <= 0.0) fail(errc::domain, "switching period must be positive");
  if (i_dc <= 0.0) fail(errc::invalid_dc, "dc-link current must be positive");
  const double sigma = extremum_sign(loc.sector);
  const double scale = ts / i_dc;
  DwellTimes dt;
  dt.t1 = checked_dwell(-sigma * refs[vector1_partner(loc.sector)] * scale, ts, "t1");
  dt.t2 = checked_dwell(-sigma * refs[vector2_partner(loc.sector)] * scale, ts, "t2");
  dt.t0 = ts - dt.t1 - dt.t2;
  if (dt.t0 < -1e-12 * ts)
    fail(errc::overmodulation, "active dwells exceed the switching period (t0 = " +
                                   std::to_string(dt.t0) + ")");
  if (dt.t0 < 0.0) dt.t0 = 0.0;
  return dt;
}

DwellTimes dwell_times_trig(double theta_local, double m, double ts) {
  if (theta_local < -kPi / 6.0 || theta_local >= kPi / 6.0)
    fail(errc::domain, "theta_local " + std::to_string(theta_local) + " outside [-pi/6, pi/6)");
  if (m < 0.0 || m > 1.0) fail(errc::overmodulation, "modulation index outside [0, 1]");
  if (ts <= 0.0) fail(errc::domain, "switching period must be positive");
  DwellTimes dt;
  dt.t1 = m * ts * std::sin(kPi / 6.0 - theta_local);
  dt.t2 = m * ts * std::sin(theta_local + kPi / 6.0);
  dt.t0 = ts - dt.t1 - dt.t2;
  return dt;
}

SwitchingTimeline assemble_timeline(Pattern pattern, const SectorLocation& loc,
                                    const DwellTimes& dt) {
  const Phase ext = extremum_phase(loc.sector);
  const Phase pmin = min_abs_phase(loc.sector, loc.half);
  // The redundant state 111 realizes the sector-edge vector nearer the reference,
  // which carries the larger dwell; the two-switch state carries the smaller.
  const double t_center = loc.half == Half::a ? dt.t1 : dt.t2;
  const double t_outer = loc.half == Half::a ? dt.t2 : dt.t1;

  const SwitchState zero = pattern == Pattern::i ? SwitchState::single(pmin) : kStateNone;
  const SwitchState outer = SwitchState::pair(ext, pmin);

  SwitchingTimeline tl;
  tl.period = dt.total();
  tl.segments = {{zero, dt.t0 / 2.0},         {outer, t_outer / 2.0},
                 {kStateAll, t_center / 2.0}, {kStateAll, t_center / 2.0},
                 {outer, t_outer / 2.0},      {zero, dt.t0 / 2.0}};
  return tl;
}

SwitchingTimeline gate_edges_carrier(const OnTimes& on, double ts, int resolution) {
  if (resolution < 100) fail(errc::domain, "carrier resolution must be at least 100 ticks");
  if (ts <= 0.0) fail(errc::domain, "switching period must be positive");
  const double duty_a = on.a / ts;
  const double duty_b = on.b / ts;
  const double duty_c = on.c / ts;
  for (double d : {duty_a, duty_b, duty_c})
    if (d < -1e-12 || d > 1.0 + 1e-12) fail(errc::domain, "duty outside [0, 1]");

  SwitchingTimeline tl;
  tl.period = ts;
  const double tick = ts / resolution;
  for (int k = 0; k < resolution; ++k) {
    // Triangle sampled at tick centers: 1 at the period edges, 0 at the middle,
    // never exactly reaching either, so duties 0 and 1 saturate cleanly.
    const double tc = (k + 0.5) * tick;
    const double carrier = std::fabs(1.0 - 2.0 * tc / ts);
    const SwitchState s =
        SwitchState::from_gates(duty_a >= carrier, duty_b >= carrier, duty_c >= carrier);
    if (!tl.segments.empty() && tl.segments.back().state == s)
      tl.segments.back().duration += tick;
    else
      tl.segments.push_back({s, tick});
  }
  return tl;
}

Conduction conduction_map(SwitchState state, const SectorLocation& loc, double i_dc) {
  Conduction out;
  if (state.is_zero_state()) return out;  // freewheeling, no phase conduction

  const Phase ext = extremum_phase(loc.sector);
  const Phase mid = mid_abs_phase(loc.sector, loc.half);
  const Phase mn = min_abs_phase(loc.sector, loc.half);
  const int sigma = extremum_sign(loc.sector);

  Phase x, y;  // conduction pair, unordered
  if (state == kStateAll) {
    x = ext;
    y = mid;
  } else {
    x = state.on(ext) ? ext : mid;
    y = state.on(mn) ? mn : mid;
    if (x == y) return out;  // single-switch handled above; unreachable for legal states
  }

  // Current leaves the phase with the higher signed reference. With polarity
  // sigma the extremum is the top (sigma > 0) or bottom (sigma < 0) of the
  // signed ranking ext / min / mid.
  const auto rank = [&](Phase p) {
    if (p == ext) return sigma > 0 ? 2 : 0;
    if (p == mn) return 1;
    return sigma > 0 ? 0 : 2;
  };
  out.from = rank(x) > rank(y) ? x : y;
  out.to = rank(x) > rank(y) ? y : x;
  out.conducting = true;
  out.currents[out.from] = i_dc;
  out.currents[out.to] = -i_dc;
  return out;
}

PhaseTriple timeline_average_currents(const SwitchingTimeline& tl, const SectorLocation& loc,
                                      double i_dc, const ConductionFn& conduction) {
  PhaseTriple sum;
  for (const Segment& seg : tl.segments) {
    if (seg.duration == 0.0) continue;
    sum = sum + seg.duration * conduction(seg.state, loc, i_dc).currents;
  }
  return (1.0 / tl.period) * sum;
}

namespace {

struct SortedRefs {
  Phase id[3];
  double val[3];
};

// Fixed compare-exchange ladder (0,1)(0,2)(1,2): exactly three comparisons and
// three conditional swaps per cycle, independent of the data.
SortedRefs sort3_counted(const PhaseTriple& refs, OpCounters& c) {
  SortedRefs s{{Phase::A, Phase::B, Phase::C},
               {std::fabs(refs.a), std::fabs(refs.b), std::fabs(refs.c)}};
  const auto cmpswap = [&](int i, int j) {
    c.relational_ops += 1;
    c.branches += 1;
    if (s.val[i] < s.val[j]) {
      std::swap(s.val[i], s.val[j]);
      std::swap(s.id[i], s.id[j]);
    }
  };
  cmpswap(0, 1);
  cmpswap(0, 2);
  cmpswap(1, 2);
  return s;
}

}  // namespace

CountedCycle counted_cycle(Scheme scheme, const OperatingPoint& op) {
  CountedCycle out;
  // References and the sector location come in as sampled signals; the counters
  // cover only the modulation computation itself. The location is taken from the
  // unit-amplitude triple so it stays defined at m = 0.
  const PhaseTriple refs = reference_currents(op.theta, op.m, op.i_dc);
  const SectorLocation loc = locate_sector(reference_currents(op.theta, 1.0, 1.0));

  DwellTimes dt;
  if (scheme == Scheme::svm) {
    OpCounters& c = out.counters;
    const double sixth = kPi / 3.0;
    const double x = op.theta + kPi / 6.0;
    c.additions += 1;
    const double k = std::floor(x / sixth);
    c.multiplications += 1;  // 1/sixth scaling
    c.branches += 1;         // floor
    double theta_local = x - k * sixth - kPi / 6.0;
    c.multiplications += 1;
    c.subtractions += 2;
    theta_local = std::clamp(theta_local, -kPi / 6.0, std::nextafter(kPi / 6.0, 0.0));
    const double t1 = op.m * op.ts * std::sin(kPi / 6.0 - theta_local);
    c.multiplications += 2;
    c.subtractions += 1;
    c.trig_evals += 1;
    const double t2 = op.m * op.ts * std::sin(theta_local + kPi / 6.0);
    c.multiplications += 2;
    c.additions += 1;
    c.trig_evals += 1;
    const double t0 = op.ts - t1 - t2;
    c.subtractions += 2;
    dt = {t0, t1, t2};
  } else {
    OpCounters& c = out.counters;
    const SortedRefs s = sort3_counted(refs, c);
    const double scale = op.ts / op.i_dc;
    const double on_max = s.val[0] * scale;
    const double on_mid = s.val[1] * scale;
    c.multiplications += 2;
    // The controller's work ends at the on-times; sequencing them into states is
    // the PWM peripheral's job and stays uncounted.
    const double t_mid = on_mid;
    const double t_min = on_max - on_mid;
    dt.t0 = op.ts - on_max;
    if (loc.half == Half::a) {
      dt.t1 = t_mid;
      dt.t2 = t_min;
    } else {
      dt.t1 = t_min;
      dt.t2 = t_mid;
    }
  }
  out.timeline = assemble_timeline(sequence_pattern(scheme), loc, dt);
  return out;
}

PhaseTriple gate_on_durations(const SwitchingTimeline& tl) {
  PhaseTriple on;
  for (const Segment& seg : tl.segments)
    for (Phase p : {Phase::A, Phase::B, Phase::C})
      if (seg.state.on(p)) on[p] += seg.duration;
  return on;
}

namespace {

// Gate levels per nonempty segment, as (level, start-time) runs.
std::vector<std::pair<bool, double>> gate_runs(const SwitchingTimeline& tl, Phase p) {
  std::vector<std::pair<bool, double>> runs;
  double t = 0.0;
  for (const Segment& seg : tl.segments) {
    if (seg.duration > 0.0) {
      const bool level = seg.state.on(p);
      if (runs.empty() || runs.back().first != level) runs.push_back({level, t});
    }
    t += seg.duration;
  }
  return runs;
}

}  // namespace

int rising_edge_count(const SwitchingTimeline& tl, Phase p) {
  int n = 0;
  const auto runs = gate_runs(tl, p);
  for (size_t i = 1; i < runs.size(); ++i)
    if (runs[i].first && !runs[i - 1].first) ++n;
  return n;
}

int falling_edge_count(const SwitchingTimeline& tl, Phase p) {
  int n = 0;
  const auto runs = gate_runs(tl, p);
  for (size_t i = 1; i < runs.size(); ++i)
    if (!runs[i].first && runs[i - 1].first) ++n;
  return n;
}

std::optional<double> rising_edge_time(const SwitchingTimeline& tl, Phase p) {
  const auto runs = gate_runs(tl, p);
  for (size_t i = 1; i < runs.size(); ++i)
    if (runs[i].first && !runs[i - 1].first) return runs[i].second;
  return std::nullopt;
}

std::optional<double> falling_edge_time(const SwitchingTimeline& tl, Phase p) {
  const auto runs = gate_runs(tl, p);
  for (size_t i = 1; i < runs.size(); ++i)
    if (!runs[i].first && runs[i - 1].first) return runs[i].second;
  return std::nullopt;
}

std::string validate_timeline(const SwitchingTimeline& tl) {
  if (tl.segments.empty()) return "timeline has no segments";
  const size_t n = tl.segments.size();
  double active = 0.0;
  for (const Segment& seg : tl.segments) {
    if (seg.duration < 0.0) return "negative segment duration";
    if (!seg.state.is_zero_state()) active += seg.duration;
  }
  if (std::fabs(tl.total_duration() - tl.period) > 1e-12 * tl.period)
    return "segment durations do not sum to the period";
  for (size_t i = 0; i < n / 2; ++i) {
    const Segment& head = tl.segments[i];
    const Segment& tail = tl.segments[n - 1 - i];
    if (!(head.state == tail.state)) return "segment states are not palindromic";
    if (std::fabs(head.duration - tail.duration) > 1e-12 * tl.period)
      return "segment durations are not mirrored";
  }
  if (active > 0.0) {
    // Redundant state must hold the center whenever any active dwell exists.
    if (!(tl.state_at(tl.period / 2.0) == kStateAll)) return "state 111 is not centered";
  }
  for (Phase p : {Phase::A, Phase::B, Phase::C}) {
    if (rising_edge_count(tl, p) > 1 || falling_edge_count(tl, p) > 1)
      return std::string("phase ") + phase_name(p) + " switches more than once";
  }
  return {};
}

}  // namespace tpts
