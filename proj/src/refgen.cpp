#include "tpts/refgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "tpts/errors.hpp"

namespace tpts {

double PhaseTriple::max_abs() const {
  return std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
}

double GridConfig::v_phase_peak() const { return v_line_line_peak / std::sqrt(3.0); }

PhaseTriple reference_currents(double theta, double m, double i_dc) {
  if (m < 0.0 || m > 1.0)
    fail(errc::overmodulation, "modulation index " + std::to_string(m) + " outside [0, 1]");
  if (i_dc <= 0.0)
    fail(errc::invalid_dc, "dc-link current must be positive, got " + std::to_string(i_dc));
  const double peak = m * i_dc;
  return {peak * std::cos(theta), peak * std::cos(theta - kTwoPi / 3.0),
          peak * std::cos(theta + kTwoPi / 3.0)};
}

AbsOrdering classify_abs(const PhaseTriple& refs) {
  std::array<std::pair<Phase, double>, 3> by_abs = {{{Phase::A, std::fabs(refs.a)},
                                                     {Phase::B, std::fabs(refs.b)},
                                                     {Phase::C, std::fabs(refs.c)}}};
  std::stable_sort(by_abs.begin(), by_abs.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  return {by_abs[0].first, by_abs[1].first, by_abs[2].first,
          by_abs[0].second, by_abs[1].second, by_abs[2].second};
}

SectorLocation locate_sector(const PhaseTriple& refs) {
  if (refs.max_abs() == 0.0)
    fail(errc::indeterminate_sector, "sector undefined for the all-zero reference triple");
  // Space-vector angle; for a zero-sum triple alpha reduces to the A component.
  const double alpha = (2.0 / 3.0) * (refs.a - 0.5 * (refs.b + refs.c));
  const double beta = (refs.b - refs.c) / std::sqrt(3.0);
  const double theta = std::atan2(beta, alpha);

  const double sixth = kPi / 3.0;
  double x = theta + kPi / 6.0;
  x -= kTwoPi * std::floor(x / kTwoPi);  // wrap to [0, 2pi)
  int k = static_cast<int>(std::floor(x / sixth));
  if (k > 5) k = 5;  // guard x == 2pi after roundoff
  double theta_local = x - k * sixth - kPi / 6.0;
  // the division above can round across a boundary by one ulp either way
  if (theta_local >= kPi / 6.0) {
    k = (k + 1) % 6;
    theta_local -= sixth;
  }
  if (theta_local < -kPi / 6.0) theta_local = -kPi / 6.0;

  SectorLocation loc;
  loc.sector = k + 1;
  loc.theta_local = theta_local;
  loc.half = theta_local < 0.0 ? Half::a : Half::b;
  return loc;
}

namespace {
constexpr int mod3(int x) { return ((x % 3) + 3) % 3; }
}  // namespace

Phase extremum_phase(int sector) { return phase_from_index(mod3(1 - sector)); }

int extremum_sign(int sector) { return (sector % 2 != 0) ? +1 : -1; }

Phase min_abs_phase(int sector, Half half) {
  return phase_from_index(half == Half::a ? mod3(3 - sector) : mod3(2 - sector));
}

Phase mid_abs_phase(int sector, Half half) {
  const int e = phase_index(extremum_phase(sector));
  const int n = phase_index(min_abs_phase(sector, half));
  return phase_from_index(3 - e - n);
}

AbsOrdering ordering_for_location(const PhaseTriple& refs, const SectorLocation& loc) {
  AbsOrdering ord;
  ord.max_phase = extremum_phase(loc.sector);
  ord.mid_phase = mid_abs_phase(loc.sector, loc.half);
  ord.min_phase = min_abs_phase(loc.sector, loc.half);
  ord.max_val = std::fabs(refs[ord.max_phase]);
  ord.mid_val = std::fabs(refs[ord.mid_phase]);
  ord.min_val = std::fabs(refs[ord.min_phase]);
  return ord;
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::pattern_i: return "pattern1";
    case Scheme::pattern_ii: return "pattern2";
    case Scheme::svm: return "svm";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  if (name == "pattern1" || name == "patternI" || name == "i") return Scheme::pattern_i;
  if (name == "pattern2" || name == "patternII" || name == "ii") return Scheme::pattern_ii;
  if (name == "svm" || name == "svm-trig") return Scheme::svm;
  return std::nullopt;
}

}  // namespace tpts
