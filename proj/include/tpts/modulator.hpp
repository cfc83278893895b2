#pragma once

#include <functional>

#include "tpts/refgen.hpp"
#include "tpts/types.hpp"

namespace tpts {

// Pattern I on-times: max and mid phases proportional to their amplitudes, the
// minimum-absolute phase clamped on for the whole period.
OnTimes ontimes_pattern1(const AbsOrdering& ord, double ts, double i_dc);

// Pattern II on-times: as pattern I for max and mid, but the minimum-absolute
// phase receives the max phase's on-time, so no phase is clamped.
OnTimes ontimes_pattern2(const AbsOrdering& ord, double ts, double i_dc);

// Dwell times read off the reference currents: in sector 1, t1 = -I_B*ts/i_dc,
// t2 = -I_C*ts/i_dc, t0 = ts - t1 - t2; other sectors by phase rotation.
DwellTimes dwell_times_from_currents(const PhaseTriple& refs, const SectorLocation& loc,
                                     double ts, double i_dc);

// Conventional SVM dwell times: t1 = m*ts*sin(pi/6 - theta_local),
// t2 = m*ts*sin(theta_local + pi/6). Agrees with the current-based route.
DwellTimes dwell_times_trig(double theta_local, double m, double ts);

// Six-segment symmetric sequence: [zero, outer, 111, 111, outer, zero] with half
// dwells. Pattern I uses the zero state that keeps the min-abs phase's switch on;
// pattern II uses 000.
SwitchingTimeline assemble_timeline(Pattern pattern, const SectorLocation& loc,
                                    const DwellTimes& dt);

// Realizes the gating by comparing per-phase duties (on/ts) against one symmetric
// center-aligned triangular carrier sampled at `resolution` ticks per period.
SwitchingTimeline gate_edges_carrier(const OnTimes& on, double ts, int resolution);

// Phase currents injected by a switch state. Zero states freewheel; an active
// state conducts i_dc between two phases, the pair and polarity fixed by the
// sector geometry (state 111 conducts between the max- and mid-abs phases).
struct Conduction {
  PhaseTriple currents;
  bool conducting = false;
  Phase from = Phase::A;  // current leaves this phase (valid when conducting)
  Phase to = Phase::A;    // and returns through this one
};
Conduction conduction_map(SwitchState state, const SectorLocation& loc, double i_dc);

using ConductionFn = std::function<Conduction(SwitchState, const SectorLocation&, double)>;

// Per-period average of the injected phase currents; the ampere-second balance
// oracle evaluates this against the reference triple.
PhaseTriple timeline_average_currents(const SwitchingTimeline& tl, const SectorLocation& loc,
                                      double i_dc, const ConductionFn& conduction = conduction_map);

struct OperatingPoint {
  double theta = 0.0;
  double m = 0.5;
  double i_dc = 5.0;
  double ts = 1.0 / 18000.0;
};

struct CountedCycle {
  SwitchingTimeline timeline;
  OpCounters counters;
};

// One control cycle with instrumented counting of the modulation computation.
// Carrier schemes sort the three absolute references with a fixed three-compare
// ladder (no trig); the SVM baseline evaluates two sines.
CountedCycle counted_cycle(Scheme scheme, const OperatingPoint& op);

// Timeline queries used by the validators and the analysis layer.
PhaseTriple gate_on_durations(const SwitchingTimeline& tl);
int rising_edge_count(const SwitchingTimeline& tl, Phase p);
int falling_edge_count(const SwitchingTimeline& tl, Phase p);
// First rising / falling instant of a phase gate, or nullopt if it never switches.
std::optional<double> rising_edge_time(const SwitchingTimeline& tl, Phase p);
std::optional<double> falling_edge_time(const SwitchingTimeline& tl, Phase p);

// Checks the sequence conditions: segments palindromic, durations mirrored and
// summing to the period, redundant state 111 centered, no phase switching more
// than once. Returns an empty string when valid, else a description.
std::string validate_timeline(const SwitchingTimeline& tl);

}  // namespace tpts
