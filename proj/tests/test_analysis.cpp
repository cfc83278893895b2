#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tpts/analysis.hpp"
#include "tpts/errors.hpp"
#include "tpts/modulator.hpp"

using namespace tpts;

namespace {

std::vector<double> sample_tone(double amp, double phase, double f, double dt, size_t n,
                                int harmonic = 1) {
  std::vector<double> out(n);
  for (size_t k = 0; k < n; ++k) out[k] = amp * std::cos(kTwoPi * f * harmonic * k * dt + phase);
  return out;
}

}  // namespace

TEST_CASE("fundamental extraction is exact for pure tones") {
  const double f1 = 50.0, dt = 1e-5;
  const size_t n = 4000;  // two periods
  SUBCASE("cosine at zero phase") {
    const auto s = sample_tone(2.5, 0.0, f1, dt, n);
    const SpectrumPoint p = fundamental(s, dt, f1);
    CHECK(p.amplitude == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(p.phase == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("a fifth harmonic does not leak into the fundamental bin") {
    auto s = sample_tone(2.5, 0.0, f1, dt, n);
    const auto h5 = sample_tone(0.1, 0.3, f1, dt, n, 5);
    for (size_t k = 0; k < n; ++k) s[k] += h5[k];
    CHECK(fundamental(s, dt, f1).amplitude == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(harmonic_amplitude(s, dt, f1, 5) == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("synthesis round-trip recovers amplitude and phase") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.1, 10.0), up(-kPi, kPi);
    for (int i = 0; i < 50; ++i) {
      const double amp = ua(rng), ph = up(rng);
      const SpectrumPoint p = fundamental(sample_tone(amp, ph, f1, dt, n), dt, f1);
      CHECK(p.amplitude == doctest::Approx(amp).epsilon(1e-12));
      CHECK(std::fabs(std::remainder(p.phase - ph, kTwoPi)) <= 1e-12);
    }
  }
  SUBCASE("non-integer window is rejected") {
    const auto s = sample_tone(1.0, 0.0, f1, dt, 4321);
    CHECK_THROWS_AS(fundamental(s, dt, f1), error);
  }
}

TEST_CASE("thd") {
  const double f1 = 50.0, dt = 1.0 / (3600.0 * 50.0);
  const size_t n = 3600;

  SUBCASE("pure sinusoid has zero thd") {
    CHECK(thd(sample_tone(3.0, 0.0, f1, dt, n), dt, f1) <= 1e-12);
  }

  SUBCASE("bandlimited square wave matches the analytic series exactly") {
    // odd harmonics 1/h up to 49, the content thd(n=50) measures
    std::vector<double> s(n, 0.0);
    double expect2 = 0.0;
    for (int h = 1; h <= 49; h += 2) {
      for (size_t k = 0; k < n; ++k) s[k] += (4.0 / (kPi * h)) * std::sin(kTwoPi * f1 * h * k * dt);
      if (h >= 3) expect2 += 1.0 / (static_cast<double>(h) * h);
    }
    CHECK(thd(s, dt, f1, 50) == doctest::Approx(std::sqrt(expect2)).epsilon(1e-9));
  }

  SUBCASE("sampled square wave lands within 1 percent of 0.483") {
    // harmonics up to 109 close the truncation gap to under one percent
    std::vector<double> s(n);
    for (size_t k = 0; k < n; ++k) s[k] = (k < n / 2) ? 1.0 : -1.0;
    const double measured = thd(s, dt, f1, 110);
    CHECK(measured == doctest::Approx(0.483).epsilon(0.01));
  }

  SUBCASE("thd is invariant under amplitude scaling") {
    std::vector<double> s(n);
    for (size_t k = 0; k < n; ++k) s[k] = (k < n / 2) ? 1.0 : -1.0;
    std::vector<double> s10(n);
    for (size_t k = 0; k < n; ++k) s10[k] = 10.0 * s[k];
    CHECK(thd(s, dt, f1, 40) == doctest::Approx(thd(s10, dt, f1, 40)).epsilon(1e-12));
  }

  SUBCASE("low-pass action reduces thd") {
    // attenuate each harmonic by 1/h^2, as an LC filter would
    std::vector<double> raw(n, 0.0), filtered(n, 0.0);
    for (int h = 1; h <= 29; h += 2)
      for (size_t k = 0; k < n; ++k) {
        const double tone = (4.0 / (kPi * h)) * std::sin(kTwoPi * f1 * h * k * dt);
        raw[k] += tone;
        filtered[k] += tone / (static_cast<double>(h) * h);
      }
    CHECK(thd(filtered, dt, f1, 30) < thd(raw, dt, f1, 30));
  }

  SUBCASE("zero fundamental is rejected") {
    CHECK_THROWS_AS(thd(sample_tone(1.0, 0.0, f1, dt, n, 2), dt, f1), error);
  }
}

TEST_CASE("per-period averages") {
  const double period = 1.0 / 18000.0;
  const double dt = period / 200.0;

  SUBCASE("constant signal") {
    std::vector<double> s(1000, 5.0);
    for (double v : per_period_average(s, dt, period)) CHECK(v == doctest::Approx(5.0));
  }

  SUBCASE("zero-mean periodic ripple averages to zero") {
    std::vector<double> s(2000);
    for (size_t k = 0; k < s.size(); ++k) s[k] = std::sin(kTwoPi * (k % 200) / 200.0);
    for (double v : per_period_average(s, dt, period))
      CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }

  SUBCASE("interval-averaged timeline samples reproduce the reference triple") {
    const double theta = -kPi / 12.0;
    const PhaseTriple refs = reference_currents(theta, 0.5, 5.0);
    const SectorLocation loc = locate_sector(refs);
    const SwitchingTimeline tl =
        assemble_timeline(Pattern::i, loc, dwell_times_from_currents(refs, loc, period, 5.0));
    // each sample holds the mean of the switched current over its interval
    for (Phase p : {Phase::A, Phase::B, Phase::C}) {
      std::vector<double> samples(200, 0.0);
      double t = 0.0;
      for (const Segment& seg : tl.segments) {
        const double i_seg = conduction_map(seg.state, loc, 5.0).currents[p];
        const double t_end = t + seg.duration;
        const size_t k0 = static_cast<size_t>(t / dt);
        const size_t k1 = std::min<size_t>(199, static_cast<size_t>(t_end / dt));
        for (size_t k = k0; k <= k1; ++k) {
          const double lo = std::max(t, k * dt);
          const double hi = std::min(t_end, (k + 1) * dt);
          if (hi > lo) samples[k] += i_seg * (hi - lo) / dt;
        }
        t = t_end;
      }
      const auto avg = per_period_average(samples, dt, period);
      REQUIRE(avg.size() == 1);
      CHECK(avg[0] == doctest::Approx(refs[p]).epsilon(1e-6));
    }
  }

  SUBCASE("incommensurate sampling is rejected") {
    std::vector<double> s(100, 1.0);
    CHECK_THROWS_AS(per_period_average(s, dt * 1.01, period), error);
  }
}

TEST_CASE("clamp and transition statistics at zero modulation") {
  // pattern I with m = 0: the min-abs phase is held on, nothing switches
  const double ts = 1.0 / 18000.0;
  std::vector<SwitchingTimeline> tls;
  for (int n = 0; n < 360; ++n) {
    const double theta = kTwoPi * n / 360.0;
    const SectorLocation loc = locate_sector(reference_currents(theta, 1.0, 1.0));
    tls.push_back(assemble_timeline(Pattern::i, loc, DwellTimes{ts, 0.0, 0.0}));
  }
  const ClampStats st = clamp_and_transition_stats(tls);
  // half labels exactly on a boundary depend on trig roundoff: allow one period
  CHECK(std::fabs(st.clamp_fraction.a - 1.0 / 3.0) <= 1.0 / 360.0 + 1e-9);
  CHECK(std::fabs(st.clamp_fraction.b - 1.0 / 3.0) <= 1.0 / 360.0 + 1e-9);
  CHECK(std::fabs(st.clamp_fraction.c - 1.0 / 3.0) <= 1.0 / 360.0 + 1e-9);
  CHECK(st.max_transitions[0] == 0);
  CHECK(st.max_transitions[1] == 0);
  CHECK(st.max_transitions[2] == 0);
}

TEST_CASE("pattern I clamp arcs are two contiguous 60-degree spans per phase") {
  const double ts = 1.0 / 18000.0;
  const int periods = 360;
  std::array<std::vector<bool>, 3> clamped;
  for (auto& v : clamped) v.assign(periods, false);
  for (int n = 0; n < periods; ++n) {
    const double theta = kTwoPi * n / periods;
    const SectorLocation loc = locate_sector(reference_currents(theta, 1.0, 1.0));
    const PhaseTriple refs = reference_currents(theta, 0.5, 5.0);
    const SwitchingTimeline tl =
        assemble_timeline(Pattern::i, loc, dwell_times_from_currents(refs, loc, ts, 5.0));
    const PhaseTriple on = gate_on_durations(tl);
    for (Phase p : {Phase::A, Phase::B, Phase::C})
      clamped[static_cast<size_t>(phase_index(p))][static_cast<size_t>(n)] =
          on[p] >= ts * (1.0 - 1e-12);
  }
  for (int p = 0; p < 3; ++p) {
    const auto& v = clamped[static_cast<size_t>(p)];
    int runs = 0, total = 0;
    for (int n = 0; n < periods; ++n) {
      if (v[static_cast<size_t>(n)]) ++total;
      if (v[static_cast<size_t>(n)] && !v[static_cast<size_t>((n + periods - 1) % periods)]) ++runs;
    }
    CHECK(runs == 2);                     // two arcs per fundamental
    CHECK(std::abs(total - 120) <= 1);    // together a third of the cycle
  }
}

TEST_CASE("resource report") {
  const OperatingPoint op{0.4, 0.5, 5.0, 1.0 / 18000.0};
  std::array<OpCounters, 3> counters = {counted_cycle(Scheme::pattern_i, op).counters,
                                        counted_cycle(Scheme::pattern_ii, op).counters,
                                        counted_cycle(Scheme::svm, op).counters};
  const std::string table = resource_report(counters);
  CHECK(table.find("trig evals") != std::string::npos);
  CHECK(table.find("relational ops") != std::string::npos);

  SUBCASE("a carrier profile claiming trig is refused") {
    counters[0].trig_evals = 1;
    CHECK_THROWS_AS(resource_report(counters), error);
  }
}
