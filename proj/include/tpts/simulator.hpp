#pragma once

#include <vector>

#include "tpts/modulator.hpp"
#include "tpts/types.hpp"

namespace tpts {

struct CircuitParams {
  double l_in = 230e-6;   // input inductor, henries
  double r_l_in = 0.1;    // its series resistance, ohms
  double c_in = 6.8e-6;   // input capacitor, farads
  double l_out = 1e-3;    // dc-link inductor, henries
  double c_out = 150e-6;  // output capacitor, farads
  double r_damp = 0.0;    // optional resistance in series with each input capacitor
};

struct SimConfig {
  GridConfig grid;
  CircuitParams circuit;
  double f_sw = 18e3;          // switching frequency, hertz
  double m = 0.5;              // modulation index
  double load_current = 5.0;   // constant-current load, amperes
  double duration = 0.06;      // seconds
  int steps_per_period = 200;  // integration steps per switching period
  Scheme scheme = Scheme::pattern_i;

  double switching_period() const { return 1.0 / f_sw; }
};

struct SimState {
  PhaseTriple i_filter;  // input inductor currents, A
  PhaseTriple v_cap;     // input capacitor voltages, V
  double i_dc = 0.0;     // dc-link inductor current, A
  double v_out = 0.0;    // output capacitor voltage, V
};

SimState operator+(const SimState& x, const SimState& y);
SimState operator*(double s, const SimState& x);

struct PortOutput {
  PhaseTriple i_rect;   // rectifier-side phase currents
  double v_link = 0.0;  // voltage impressed on the dc link (0 while freewheeling)
};

// Ideal-switch port model: the conduction pair injects +/- i_dc and sees the
// pair's line-line capacitor voltage.
PortOutput rectifier_port(SwitchState state, const SectorLocation& loc, double i_dc,
                          const PhaseTriple& v_cap);

// State derivative for the rectifier circuit. Diode blocking: with the dc-link
// current at zero and the link voltage below the output, the current stays zero.
SimState derivative(const SimState& state, SwitchState gates, const SectorLocation& loc,
                    double t, const SimConfig& cfg);

// One classical 4th-order step with the switch state held fixed.
SimState rk4_step(const SimState& state, SwitchState gates, const SectorLocation& loc, double t,
                  double dt, const SimConfig& cfg);

struct Trace {
  std::vector<double> t;
  std::vector<SimState> states;
  std::vector<SwitchState> gates;
  std::vector<PhaseTriple> i_rect;
  std::vector<PhaseTriple> i_ref;   // references held over each switching period
  std::vector<PhaseTriple> v_grid;
  double dt = 0.0;
  double f1 = 0.0;  // grid fundamental, hertz

  size_t size() const { return t.size(); }
};

PhaseTriple grid_voltages(const GridConfig& grid, double t);

// Fixed-step switched simulation: references and the timeline are recomputed once
// per switching period from the grid angle at period start; switching instants
// snap to the integration grid.
Trace run_simulation(const SimConfig& cfg);

}  // namespace tpts
