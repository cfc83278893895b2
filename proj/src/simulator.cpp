#include "tpts/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpts/errors.hpp"

namespace tpts {

SimState operator+(const SimState& x, const SimState& y) {
  return {x.i_filter + y.i_filter, x.v_cap + y.v_cap, x.i_dc + y.i_dc, x.v_out + y.v_out};
}

SimState operator*(double s, const SimState& x) {
  return {s * x.i_filter, s * x.v_cap, s * x.i_dc, s * x.v_out};
}

PhaseTriple grid_voltages(const GridConfig& grid, double t) {
  const double vp = grid.v_phase_peak();
  const double th = kTwoPi * grid.f_grid * t + grid.phase_offset;
  return {vp * std::cos(th), vp * std::cos(th - kTwoPi / 3.0), vp * std::cos(th + kTwoPi / 3.0)};
}

PortOutput rectifier_port(SwitchState state, const SectorLocation& loc, double i_dc,
                          const PhaseTriple& v_cap) {
  const Conduction cond = conduction_map(state, loc, i_dc);
  PortOutput out;
  out.i_rect = cond.currents;
  out.v_link = cond.conducting ? v_cap[cond.from] - v_cap[cond.to] : 0.0;
  return out;
}

SimState derivative(const SimState& state, SwitchState gates, const SectorLocation& loc,
                    double t, const SimConfig& cfg) {
  const CircuitParams& cp = cfg.circuit;
  const PhaseTriple vg = grid_voltages(cfg.grid, t);

  const Conduction cond = conduction_map(gates, loc, state.i_dc);
  const PhaseTriple i_cap = state.i_filter - cond.currents;
  // Capacitor terminal voltage includes the series damping drop, if any.
  const PhaseTriple v_term = state.v_cap + cp.r_damp * i_cap;
  const double v_link = cond.conducting ? v_term[cond.from] - v_term[cond.to] : 0.0;

  SimState d;
  d.i_filter = (1.0 / cp.l_in) * (vg - v_term - cp.r_l_in * state.i_filter);
  d.v_cap = (1.0 / cp.c_in) * i_cap;

  const double v_l_out = v_link - state.v_out;
  d.i_dc = (state.i_dc <= 0.0 && v_l_out < 0.0) ? 0.0 : v_l_out / cp.l_out;

  // The electronic load draws its set current only while the output is positive.
  const double i_load = state.v_out > 0.0 ? cfg.load_current : 0.0;
  d.v_out = (state.i_dc - i_load) / cp.c_out;
  return d;
}

SimState rk4_step(const SimState& state, SwitchState gates, const SectorLocation& loc, double t,
                  double dt, const SimConfig& cfg) {
  const SimState k1 = derivative(state, gates, loc, t, cfg);
  const SimState k2 = derivative(state + (dt / 2.0) * k1, gates, loc, t + dt / 2.0, cfg);
  const SimState k3 = derivative(state + (dt / 2.0) * k2, gates, loc, t + dt / 2.0, cfg);
  const SimState k4 = derivative(state + dt * k3, gates, loc, t + dt, cfg);
  SimState next = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (next.i_dc < 0.0) next.i_dc = 0.0;  // diode blocking
  return next;
}

namespace {

void check_config(const SimConfig& cfg) {
  if (cfg.f_sw <= 0.0) fail(errc::config, "f_sw must be positive");
  if (cfg.steps_per_period < 20) fail(errc::config, "steps_per_period must be at least 20");
  if (cfg.duration <= 0.0) fail(errc::config, "duration must be positive");
  if (cfg.m < 0.0 || cfg.m > 1.0) fail(errc::overmodulation, "modulation index outside [0, 1]");
  if (cfg.load_current <= 0.0) fail(errc::config, "load_current must be positive");
}

void check_stability(const SimState& s, const SimConfig& cfg, double t) {
  const double i_bound = 10.0 * std::max(cfg.load_current, 1.0);
  const double v_bound = 10.0 * cfg.grid.v_line_line_peak;
  // negated <= comparisons so NaN counts as blown
  const bool ok = s.i_filter.max_abs() <= i_bound && std::fabs(s.i_dc) <= i_bound &&
                  s.v_cap.max_abs() <= v_bound && std::fabs(s.v_out) <= v_bound;
  if (!ok)
    fail(errc::instability, "state exceeded 10x nominal at t = " + std::to_string(t) + " s");
}

}  // namespace

Trace run_simulation(const SimConfig& cfg) {
  check_config(cfg);
  const double ts = cfg.switching_period();
  const double dt = ts / cfg.steps_per_period;
  const long n_periods = std::lround(std::ceil(cfg.duration / ts - 1e-9));
  const double i_nom = cfg.load_current;

  Trace trace;
  trace.dt = dt;
  trace.f1 = cfg.grid.f_grid;
  const size_t n_samples = static_cast<size_t>(n_periods) * cfg.steps_per_period;
  trace.t.reserve(n_samples);
  trace.states.reserve(n_samples);
  trace.gates.reserve(n_samples);
  trace.i_rect.reserve(n_samples);
  trace.i_ref.reserve(n_samples);
  trace.v_grid.reserve(n_samples);

  SimState state;
  state.v_cap = grid_voltages(cfg.grid, 0.0);
  state.i_dc = cfg.load_current;
  state.v_out = 1.5 * cfg.m * cfg.grid.v_phase_peak();

  for (long n = 0; n < n_periods; ++n) {
    const double t_period = n * ts;
    const double theta = kTwoPi * cfg.grid.f_grid * t_period + cfg.grid.phase_offset;

    // Regular sampling: one location/timeline per switching period. The location
    // comes from the unit-amplitude triple so it stays defined at m = 0.
    const SectorLocation loc = locate_sector(reference_currents(theta, 1.0, 1.0));
    const PhaseTriple refs = reference_currents(theta, cfg.m, i_nom);
    const DwellTimes dwells = cfg.scheme == Scheme::svm
                                  ? dwell_times_trig(loc.theta_local, cfg.m, ts)
                                  : dwell_times_from_currents(refs, loc, ts, i_nom);
    const SwitchingTimeline timeline = assemble_timeline(sequence_pattern(cfg.scheme), loc, dwells);

    for (int k = 0; k < cfg.steps_per_period; ++k) {
      const double t = t_period + k * dt;
      const SwitchState gates = timeline.state_at(k * dt);

      trace.t.push_back(t);
      trace.states.push_back(state);
      trace.gates.push_back(gates);
      trace.i_rect.push_back(conduction_map(gates, loc, state.i_dc).currents);
      trace.i_ref.push_back(refs);
      trace.v_grid.push_back(grid_voltages(cfg.grid, t));

      state = rk4_step(state, gates, loc, t, dt, cfg);
    }
    check_stability(state, cfg, (n + 1) * ts);
  }
  return trace;
}

}  // namespace tpts
