#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpts/modulator.hpp"

namespace tpts {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;  // witness on failure, summary statistic on success
  double seconds = 0.0;
};

inline constexpr uint64_t kDefaultSelftestSeed = 0x7073742d73656564ULL;

// Ampere-second balance: per-period timeline-averaged rectifier currents equal
// the reference triple within 1e-9 * i_dc per phase, all three schemes. The
// conduction map is injectable so a broken map is provably caught.
PropertyResult check_balance_oracle(uint64_t seed, int n_points,
                                    const ConductionFn& conduction = conduction_map);

// Pattern I/II on-times match the closed forms through the identical arithmetic
// path (exact equality).
PropertyResult check_table2_dispatch(uint64_t seed, int n_points);

// Palindrome, centered redundant state, and at most one switching per phase over
// a full fundamental of timelines for every scheme.
PropertyResult check_sequence_legality();

// Pattern I clamps each phase exactly a third of the fundamental; pattern II
// clamps nothing.
PropertyResult check_clamp_statistics();

// Trig-route dwell times agree with the current-based route within 1e-9 * ts.
PropertyResult check_trig_current_equivalence(uint64_t seed, int n_points);

// On-times are continuous in theta across every 30-degree boundary.
PropertyResult check_boundary_continuity();

// Carrier-comparator gate edges match the analytic timeline within one tick.
PropertyResult check_carrier_equivalence(uint64_t seed, int n_points);

// Counter profiles: no trig or lookups for the carrier schemes, two trig evals
// for the baseline, and data-independent counts.
PropertyResult check_counter_profile();

// classify_abs commutes with phase permutations.
PropertyResult check_classify_equivariance(uint64_t seed, int n_points);

// Location-derived phase roles agree with classify_abs away from boundaries.
PropertyResult check_ordering_consistency(uint64_t seed, int n_points);

std::vector<PropertyResult> run_selftest(uint64_t seed, int n_points = 10000);

}  // namespace tpts
