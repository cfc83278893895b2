#include "tpts/selftest.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "tpts/analysis.hpp"

namespace tpts {

namespace {

constexpr double kIdc = 5.0;
constexpr double kTs = 1.0 / 18000.0;

std::string point_str(double theta, double m, Scheme s) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "theta=%.17g m=%.17g scheme=%s", theta, m,
                scheme_name(s).c_str());
  return buf;
}

SwitchingTimeline timeline_for(Scheme scheme, double theta, double m,
                               SectorLocation* loc_out = nullptr) {
  const SectorLocation loc = locate_sector(reference_currents(theta, 1.0, 1.0));
  if (loc_out) *loc_out = loc;
  const DwellTimes dt =
      scheme == Scheme::svm
          ? dwell_times_trig(loc.theta_local, m, kTs)
          : dwell_times_from_currents(reference_currents(theta, m, kIdc), loc, kTs, kIdc);
  return assemble_timeline(sequence_pattern(scheme), loc, dt);
}

template <typename Fn>
PropertyResult timed(const std::string& name, Fn&& body) {
  PropertyResult r;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  r.passed = body(r.detail);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

PropertyResult check_balance_oracle(uint64_t seed, int n_points, const ConductionFn& conduction) {
  return timed("balance-oracle", [&](std::string& detail) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u_theta(0.0, kTwoPi);
    std::uniform_real_distribution<double> u_m(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < n_points; ++i) {
      const double theta = u_theta(rng);
      const double m = u_m(rng);
      const PhaseTriple refs = reference_currents(theta, m, kIdc);
      for (Scheme s : {Scheme::pattern_i, Scheme::pattern_ii, Scheme::svm}) {
        SectorLocation loc;
        const SwitchingTimeline tl = timeline_for(s, theta, m, &loc);
        const PhaseTriple avg = timeline_average_currents(tl, loc, kIdc, conduction);
        const PhaseTriple err = avg - refs;
        const double e = err.max_abs();
        worst = std::max(worst, e);
        if (e > 1e-9 * kIdc) {
          detail = point_str(theta, m, s) + " phase error " + std::to_string(e) + " A";
          return false;
        }
      }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |error| %.3e A over %d points x 3 schemes", worst,
                  n_points);
    detail = buf;
    return true;
  });
}

PropertyResult check_table2_dispatch(uint64_t seed, int n_points) {
  return timed("closed-form-dispatch", [&](std::string& detail) {
    std::mt19937_64 rng(seed ^ 0x1);
    std::uniform_real_distribution<double> u_theta(0.0, kTwoPi);
    std::uniform_real_distribution<double> u_m(0.0, 1.0);
    for (int i = 0; i < n_points; ++i) {
      const double theta = u_theta(rng);
      const double m = u_m(rng);
      const AbsOrdering ord = classify_abs(reference_currents(theta, m, kIdc));
      const double scale = kTs / kIdc;
      const OnTimes p1 = ontimes_pattern1(ord, kTs, kIdc);
      const OnTimes p2 = ontimes_pattern2(ord, kTs, kIdc);
      const bool ok = p1[ord.max_phase] == ord.max_val * scale &&
                      p1[ord.mid_phase] == ord.mid_val * scale && p1[ord.min_phase] == kTs &&
                      p1.clamped_phase == ord.min_phase &&
                      p2[ord.max_phase] == ord.max_val * scale &&
                      p2[ord.mid_phase] == ord.mid_val * scale &&
                      p2[ord.min_phase] == p2[ord.max_phase] && !p2.clamped_phase;
      if (!ok) {
        detail = point_str(theta, m, Scheme::pattern_i) + " on-times deviate from closed forms";
        return false;
      }
    }
    detail = std::to_string(n_points) + " points, exact equality";
    return true;
  });
}

PropertyResult check_sequence_legality() {
  return timed("sequence-legality", [&](std::string& detail) {
    const int periods = 360;  // one fundamental at 18 kHz / 50 Hz
    for (Scheme s : {Scheme::pattern_i, Scheme::pattern_ii, Scheme::svm}) {
      for (int n = 0; n < periods; ++n) {
        const double theta = kTwoPi * n / periods;
        const SwitchingTimeline tl = timeline_for(s, theta, 0.5, nullptr);
        if (const std::string err = validate_timeline(tl); !err.empty()) {
          detail = point_str(theta, 0.5, s) + ": " + err;
          return false;
        }
      }
    }
    detail = "3 schemes x 360 periods valid";
    return true;
  });
}

PropertyResult check_clamp_statistics() {
  return timed("clamp-statistics", [&](std::string& detail) {
    const int periods = 360;
    for (Scheme s : {Scheme::pattern_i, Scheme::pattern_ii}) {
      std::vector<SwitchingTimeline> tls;
      tls.reserve(periods);
      for (int n = 0; n < periods; ++n)
        tls.push_back(timeline_for(s, kTwoPi * n / periods, 0.5, nullptr));
      const ClampStats st = clamp_and_transition_stats(tls);
      for (Phase p : {Phase::A, Phase::B, Phase::C}) {
        const double want = s == Scheme::pattern_i ? 1.0 / 3.0 : 0.0;
        // +/- one period: boundary half labels depend on trig roundoff
        if (std::fabs(st.clamp_fraction[p] - want) > 1.0 / periods + 1e-9) {
          char buf[128];
          std::snprintf(buf, sizeof buf, "%s phase %c clamp fraction %.6f, expected %.6f",
                        scheme_name(s).c_str(), phase_name(p), st.clamp_fraction[p], want);
          detail = buf;
          return false;
        }
        if (st.max_transitions[static_cast<size_t>(phase_index(p))] > 2) {
          detail = scheme_name(s) + " phase switches more than once per period";
          return false;
        }
      }
    }
    detail = "pattern1 1/3 per phase, pattern2 0";
    return true;
  });
}

PropertyResult check_trig_current_equivalence(uint64_t seed, int n_points) {
  return timed("trig-current-equivalence", [&](std::string& detail) {
    std::mt19937_64 rng(seed ^ 0x2);
    std::uniform_real_distribution<double> u_theta(0.0, kTwoPi);
    std::uniform_real_distribution<double> u_m(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < n_points; ++i) {
      const double theta = u_theta(rng);
      const double m = u_m(rng);
      const PhaseTriple refs = reference_currents(theta, m, kIdc);
      const SectorLocation loc = locate_sector(reference_currents(theta, 1.0, 1.0));
      const DwellTimes from_i = dwell_times_from_currents(refs, loc, kTs, kIdc);
      const DwellTimes from_t = dwell_times_trig(loc.theta_local, m, kTs);
      const double e = std::max({std::fabs(from_i.t0 - from_t.t0), std::fabs(from_i.t1 - from_t.t1),
                                 std::fabs(from_i.t2 - from_t.t2)});
      worst = std::max(worst, e);
      if (e > 1e-9 * kTs) {
        detail = point_str(theta, m, Scheme::svm) + " dwell mismatch " + std::to_string(e) + " s";
        return false;
      }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |dwell gap| %.3e * ts over %d points", worst / kTs,
                  n_points);
    detail = buf;
    return true;
  });
}

PropertyResult check_boundary_continuity() {
  return timed("boundary-continuity", [&](std::string& detail) {
    // The max/mid/min on-times are continuous across every boundary; the phase
    // labels holding them swap there (the clamp hands over), so the comparison
    // is role-indexed.
    const double eps = 1e-9;
    const char* role_names[3] = {"max", "mid", "min"};
    for (int b = 0; b < 12; ++b) {
      const double boundary = b * kPi / 6.0;  // every 30 degrees
      for (Scheme s : {Scheme::pattern_i, Scheme::pattern_ii}) {
        const auto role_ontimes = [&](double theta) {
          const AbsOrdering ord = classify_abs(reference_currents(theta, 0.5, kIdc));
          const OnTimes on = s == Scheme::pattern_i ? ontimes_pattern1(ord, kTs, kIdc)
                                                    : ontimes_pattern2(ord, kTs, kIdc);
          return std::array<double, 3>{on[ord.max_phase], on[ord.mid_phase], on[ord.min_phase]};
        };
        const std::array<double, 3> lo = role_ontimes(boundary - eps);
        const std::array<double, 3> hi = role_ontimes(boundary + eps);
        for (int r = 0; r < 3; ++r) {
          if (std::fabs(lo[static_cast<size_t>(r)] - hi[static_cast<size_t>(r)]) > 1e-7 * kTs) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s jump %.3e s in %s on-time at %d*30deg",
                          scheme_name(s).c_str(),
                          lo[static_cast<size_t>(r)] - hi[static_cast<size_t>(r)], role_names[r],
                          b);
            detail = buf;
            return false;
          }
        }
      }
    }
    detail = "role-indexed on-times continuous at all 12 boundaries";
    return true;
  });
}

PropertyResult check_carrier_equivalence(uint64_t seed, int n_points) {
  return timed("carrier-analytic-equivalence", [&](std::string& detail) {
    std::mt19937_64 rng(seed ^ 0x3);
    std::uniform_real_distribution<double> u_theta(0.0, kTwoPi);
    std::uniform_real_distribution<double> u_m(0.0, 1.0);
    for (int i = 0; i < n_points; ++i) {
      const double theta = u_theta(rng);
      const double m = u_m(rng);
      const SectorLocation loc = locate_sector(reference_currents(theta, 1.0, 1.0));
      const AbsOrdering ord = ordering_for_location(reference_currents(theta, m, kIdc), loc);
      for (Scheme s : {Scheme::pattern_i, Scheme::pattern_ii}) {
        const OnTimes on = s == Scheme::pattern_i ? ontimes_pattern1(ord, kTs, kIdc)
                                                  : ontimes_pattern2(ord, kTs, kIdc);
        const DwellTimes dt =
            dwell_times_from_currents(reference_currents(theta, m, kIdc), loc, kTs, kIdc);
        const SwitchingTimeline analytic = assemble_timeline(sequence_pattern(s), loc, dt);
        for (int resolution : {1000, 10000}) {
          const SwitchingTimeline carrier = gate_edges_carrier(on, kTs, resolution);
          const double tick = kTs / resolution;
          for (Phase p : {Phase::A, Phase::B, Phase::C}) {
            const auto ra = rising_edge_time(analytic, p);
            const auto rc = rising_edge_time(carrier, p);
            const auto fa = falling_edge_time(analytic, p);
            const auto fc = falling_edge_time(carrier, p);
            const bool edges_match =
                ra.has_value() == rc.has_value() && fa.has_value() == fc.has_value() &&
                (!ra || std::fabs(*ra - *rc) <= tick + 1e-15) &&
                (!fa || std::fabs(*fa - *fc) <= tick + 1e-15);
            if (!edges_match) {
              detail = point_str(theta, m, s) + " phase " + phase_name(p) +
                       " carrier edge off by more than one tick at resolution " +
                       std::to_string(resolution);
              return false;
            }
          }
        }
      }
    }
    detail = std::to_string(n_points) + " points within one tick at 1k and 10k";
    return true;
  });
}

PropertyResult check_counter_profile() {
  return timed("counter-profile", [&](std::string& detail) {
    const OperatingPoint at_half{0.7, 0.5, kIdc, kTs};
    const OperatingPoint at_zero{0.7, 0.0, kIdc, kTs};
    const OpCounters p1 = counted_cycle(Scheme::pattern_i, at_half).counters;
    const OpCounters p2 = counted_cycle(Scheme::pattern_ii, at_half).counters;
    const OpCounters p2z = counted_cycle(Scheme::pattern_ii, at_zero).counters;
    const OpCounters sv = counted_cycle(Scheme::svm, at_half).counters;
    if (p1.trig_evals != 0 || p2.trig_evals != 0) {
      detail = "carrier scheme evaluated trig";
      return false;
    }
    if (p1.lookup_accesses != 0 || p2.lookup_accesses != 0) {
      detail = "carrier scheme touched a lookup table";
      return false;
    }
    if (p1.relational_ops < 3 || p1.branches < 3) {
      detail = "carrier scheme below 3 comparisons / 3 branches";
      return false;
    }
    if (!(p1 == p2)) {
      detail = "pattern1 and pattern2 counter profiles differ";
      return false;
    }
    if (!(p2 == p2z)) {
      detail = "counter profile depends on the modulation index";
      return false;
    }
    if (sv.trig_evals != 2) {
      detail = "svm baseline trig count " + std::to_string(sv.trig_evals) + ", expected 2";
      return false;
    }
    if (sv.multiplications < 2) {
      detail = "svm baseline multiplications below 2";
      return false;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "carrier: %ld cmp / %ld branch / 0 trig; svm: %ld trig",
                  p1.relational_ops, p1.branches, sv.trig_evals);
    detail = buf;
    return true;
  });
}

PropertyResult check_classify_equivariance(uint64_t seed, int n_points) {
  return timed("classify-equivariance", [&](std::string& detail) {
    std::mt19937_64 rng(seed ^ 0x4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int i = 0; i < n_points; ++i) {
      const double a = u(rng), b = u(rng);
      const PhaseTriple refs{a, b, -a - b};
      const AbsOrdering base = classify_abs(refs);
      for (const auto& perm : perms) {
        // permuted[p] = refs[perm[p]]
        PhaseTriple permuted;
        for (int p = 0; p < 3; ++p) permuted[phase_from_index(p)] = refs[phase_from_index(perm[p])];
        const AbsOrdering got = classify_abs(permuted);
        // the phase now holding the old max must be reported as max, etc.
        const auto inverse_of = [&](Phase old) {
          for (int p = 0; p < 3; ++p)
            if (perm[p] == phase_index(old)) return phase_from_index(p);
          return old;
        };
        if (got.max_phase != inverse_of(base.max_phase) ||
            got.mid_phase != inverse_of(base.mid_phase) ||
            got.min_phase != inverse_of(base.min_phase)) {
          char buf[128];
          std::snprintf(buf, sizeof buf, "refs=(%.17g,%.17g,%.17g) perm=(%d%d%d)", refs.a, refs.b,
                        refs.c, perm[0], perm[1], perm[2]);
          detail = buf;
          return false;
        }
      }
    }
    detail = std::to_string(n_points) + " triples x 6 permutations";
    return true;
  });
}

PropertyResult check_ordering_consistency(uint64_t seed, int n_points) {
  return timed("location-ordering-consistency", [&](std::string& detail) {
    std::mt19937_64 rng(seed ^ 0x5);
    std::uniform_real_distribution<double> u_theta(0.0, kTwoPi);
    for (int i = 0; i < n_points; ++i) {
      const double theta = u_theta(rng);
      const PhaseTriple refs = reference_currents(theta, 0.8, kIdc);
      const SectorLocation loc = locate_sector(refs);
      const AbsOrdering a = classify_abs(refs);
      const AbsOrdering b = ordering_for_location(refs, loc);
      if (a.max_phase != b.max_phase || a.mid_phase != b.mid_phase ||
          a.min_phase != b.min_phase) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "theta=%.17g: classify (%c,%c,%c) vs location sector %d%c (%c,%c,%c)", theta,
                      phase_name(a.max_phase), phase_name(a.mid_phase), phase_name(a.min_phase),
                      loc.sector, half_name(loc.half), phase_name(b.max_phase),
                      phase_name(b.mid_phase), phase_name(b.min_phase));
        detail = buf;
        return false;
      }
    }
    detail = std::to_string(n_points) + " points agree";
    return true;
  });
}

std::vector<PropertyResult> run_selftest(uint64_t seed, int n_points) {
  std::vector<PropertyResult> results;
  results.push_back(check_balance_oracle(seed, n_points));
  results.push_back(check_table2_dispatch(seed, n_points));
  results.push_back(check_sequence_legality());
  results.push_back(check_clamp_statistics());
  results.push_back(check_trig_current_equivalence(seed, n_points));
  results.push_back(check_boundary_continuity());
  results.push_back(check_carrier_equivalence(seed, std::max(1, n_points / 100)));
  results.push_back(check_counter_profile());
  results.push_back(check_classify_equivariance(seed, std::max(1, n_points / 10)));
  results.push_back(check_ordering_consistency(seed, n_points));
  return results;
}

}  // namespace tpts
