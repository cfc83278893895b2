#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tpts {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Phase : int { A = 0, B = 1, C = 2 };

constexpr char phase_name(Phase p) { return "ABC"[static_cast<int>(p)]; }
constexpr int phase_index(Phase p) { return static_cast<int>(p); }
constexpr Phase phase_from_index(int i) { return static_cast<Phase>(((i % 3) + 3) % 3); }

// Ordered (A,B,C) real values; amperes or volts depending on context.
struct PhaseTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator[](Phase p) const { return p == Phase::A ? a : (p == Phase::B ? b : c); }
  double& operator[](Phase p) { return p == Phase::A ? a : (p == Phase::B ? b : c); }
  double sum() const { return a + b + c; }
  double max_abs() const;

  friend PhaseTriple operator+(const PhaseTriple& x, const PhaseTriple& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c};
  }
  friend PhaseTriple operator-(const PhaseTriple& x, const PhaseTriple& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c};
  }
  friend PhaseTriple operator*(double s, const PhaseTriple& x) {
    return {s * x.a, s * x.b, s * x.c};
  }
  friend bool operator==(const PhaseTriple&, const PhaseTriple&) = default;
};

struct GridConfig {
  double v_line_line_peak = 245.0;  // volts
  double f_grid = 50.0;             // hertz
  double phase_offset = 0.0;        // radians

  double v_phase_peak() const;
  double fundamental_period() const { return 1.0 / f_grid; }
};

enum class Half { a, b };

constexpr char half_name(Half h) { return h == Half::a ? 'a' : 'b'; }

// Sector 1..6 (60 deg each), subsector half, and in-sector angle in [-pi/6, pi/6).
struct SectorLocation {
  int sector = 1;
  Half half = Half::b;
  double theta_local = 0.0;
};

// Absolute amplitudes of the three references sorted descending, with phase identities.
struct AbsOrdering {
  Phase max_phase = Phase::A;
  Phase mid_phase = Phase::B;
  Phase min_phase = Phase::C;
  double max_val = 0.0;
  double mid_val = 0.0;
  double min_val = 0.0;
};

// Gate bits (s_A, s_B, s_C) packed as 0b(A)(B)(C); e.g. 0b101 = switches A and C on.
class SwitchState {
 public:
  constexpr SwitchState() = default;
  constexpr explicit SwitchState(unsigned bits) : bits_(static_cast<uint8_t>(bits & 0b111u)) {}

  static constexpr SwitchState from_gates(bool a, bool b, bool c) {
    return SwitchState((a ? 0b100u : 0u) | (b ? 0b010u : 0u) | (c ? 0b001u : 0u));
  }
  static constexpr SwitchState single(Phase p) { return SwitchState(0b100u >> phase_index(p)); }
  static constexpr SwitchState pair(Phase p, Phase q) {
    return SwitchState((0b100u >> phase_index(p)) | (0b100u >> phase_index(q)));
  }

  constexpr bool on(Phase p) const { return (bits_ >> (2 - phase_index(p))) & 1u; }
  constexpr unsigned bits() const { return bits_; }
  constexpr int switch_count() const { return std::popcount(static_cast<unsigned>(bits_)); }
  // 000, 001, 010, 100 inject no current; 110, 101, 011, 111 are active.
  constexpr bool is_zero_state() const { return switch_count() <= 1; }

  std::string str() const {
    return {on(Phase::A) ? '1' : '0', on(Phase::B) ? '1' : '0', on(Phase::C) ? '1' : '0'};
  }

  friend constexpr bool operator==(SwitchState, SwitchState) = default;

 private:
  uint8_t bits_ = 0;
};

inline constexpr SwitchState kStateNone{0b000};
inline constexpr SwitchState kStateAll{0b111};

// Vector dwell durations within one switching period: T_0 zero, T_1 and T_2 active.
struct DwellTimes {
  double t0 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;

  double total() const { return t0 + t1 + t2; }
};

// Per-phase gate on-durations within one switching period.
struct OnTimes {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::optional<Phase> clamped_phase;

  double operator[](Phase p) const { return p == Phase::A ? a : (p == Phase::B ? b : c); }
  double& operator[](Phase p) { return p == Phase::A ? a : (p == Phase::B ? b : c); }
};

struct Segment {
  SwitchState state;
  double duration = 0.0;
};

// Ordered switch-state segments spanning one switching period.
struct SwitchingTimeline {
  std::vector<Segment> segments;
  double period = 0.0;

  SwitchState state_at(double t) const;
  double total_duration() const;
};

// Operation counts accumulated over one control cycle.
struct OpCounters {
  long multiplications = 0;
  long additions = 0;
  long subtractions = 0;
  long trig_evals = 0;
  long relational_ops = 0;
  long branches = 0;
  long lookup_accesses = 0;

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

enum class Pattern { i, ii };

enum class Scheme { pattern_i, pattern_ii, svm };

// The SVM baseline reuses the pattern-I state sequencing with trig-computed dwells.
constexpr Pattern sequence_pattern(Scheme s) {
  return s == Scheme::pattern_ii ? Pattern::ii : Pattern::i;
}

std::string scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

}  // namespace tpts
