#include "tpts/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "tpts/errors.hpp"

namespace tpts {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view v, const std::string& key, int line) {
  const std::string s(v);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(x))
    fail(errc::config, "non-numeric value '" + s + "' for key '" + key + "' (line " +
                           std::to_string(line) + ")");
  return x;
}

struct KeySpec {
  std::function<void(SimConfig&, double)> set;
  double lo;
  double hi;
};

const std::map<std::string, KeySpec, std::less<>>& numeric_keys() {
  static const std::map<std::string, KeySpec, std::less<>> keys = {
      {"v_ll_peak", {[](SimConfig& c, double v) { c.grid.v_line_line_peak = v; }, 1e-9, 1e6}},
      {"f_grid", {[](SimConfig& c, double v) { c.grid.f_grid = v; }, 1e-9, 1e6}},
      {"phase_offset", {[](SimConfig& c, double v) { c.grid.phase_offset = v; }, -1e3, 1e3}},
      {"l_in", {[](SimConfig& c, double v) { c.circuit.l_in = v; }, 1e-12, 1e3}},
      {"r_l_in", {[](SimConfig& c, double v) { c.circuit.r_l_in = v; }, 0.0, 1e6}},
      {"c_in", {[](SimConfig& c, double v) { c.circuit.c_in = v; }, 1e-15, 1e3}},
      {"l_out", {[](SimConfig& c, double v) { c.circuit.l_out = v; }, 1e-12, 1e3}},
      {"c_out", {[](SimConfig& c, double v) { c.circuit.c_out = v; }, 1e-15, 1e3}},
      {"r_damp", {[](SimConfig& c, double v) { c.circuit.r_damp = v; }, 0.0, 1e6}},
      {"f_sw", {[](SimConfig& c, double v) { c.f_sw = v; }, 1e-9, 1e9}},
      {"m", {[](SimConfig& c, double v) { c.m = v; }, 0.0, 1.0}},
      {"i_load", {[](SimConfig& c, double v) { c.load_current = v; }, 1e-9, 1e6}},
      {"duration", {[](SimConfig& c, double v) { c.duration = v; }, 1e-12, 1e6}},
      {"steps_per_period",
       {[](SimConfig& c, double v) { c.steps_per_period = static_cast<int>(v); }, 20, 1e7}},
  };
  return keys;
}

void apply_pair(SimConfig& cfg, std::string_view key_sv, std::string_view value_sv, int line) {
  const std::string key(key_sv);
  if (key == "scheme") {
    const auto s = scheme_from_name(std::string(value_sv));
    if (!s)
      fail(errc::config, "unknown scheme '" + std::string(value_sv) + "' (line " +
                             std::to_string(line) + "); expected pattern1, pattern2, or svm");
    cfg.scheme = *s;
    return;
  }
  const auto it = numeric_keys().find(key);
  if (it == numeric_keys().end())
    fail(errc::config, "unknown config key '" + key + "' (line " + std::to_string(line) + ")");
  const double v = parse_number(value_sv, key, line);
  if (v < it->second.lo || v > it->second.hi) {
    if (key == "m" && v > 1.0)
      fail(errc::overmodulation,
           "m = " + std::string(value_sv) + " exceeds 1 (line " + std::to_string(line) + ")");
    fail(errc::config, "value " + std::string(value_sv) + " for key '" + key +
                           "' outside [" + std::to_string(it->second.lo) + ", " +
                           std::to_string(it->second.hi) + "] (line " + std::to_string(line) + ")");
  }
  it->second.set(cfg, v);
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  int line = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line;
    if (const size_t hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    const std::string_view stripped = trim(raw);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string_view::npos)
      fail(errc::config, "expected key = value (line " + std::to_string(line) + ")");
    apply_pair(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)), line);
  }
  return cfg;
}

void apply_override(SimConfig& cfg, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    fail(errc::config, "override '" + assignment + "' is not of the form key=value");
  apply_pair(cfg, trim(std::string_view(assignment).substr(0, eq)),
             trim(std::string_view(assignment).substr(eq + 1)), 0);
}

std::string config_text(const SimConfig& d) {
  std::ostringstream os;
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "# three-phase three-switch rectifier run configuration\n"
     << "v_ll_peak = " << num(d.grid.v_line_line_peak) << "   # line-line peak grid voltage, V\n"
     << "f_grid = " << num(d.grid.f_grid) << "                # grid frequency, Hz\n"
     << "phase_offset = " << num(d.grid.phase_offset) << "    # grid angle at t = 0, rad\n"
     << "l_in = " << num(d.circuit.l_in) << "                 # input inductor, H\n"
     << "r_l_in = " << num(d.circuit.r_l_in) << "             # input inductor resistance, ohm\n"
     << "c_in = " << num(d.circuit.c_in) << "                 # input capacitor, F\n"
     << "l_out = " << num(d.circuit.l_out) << "               # dc-link inductor, H\n"
     << "c_out = " << num(d.circuit.c_out) << "               # output capacitor, F\n"
     << "r_damp = " << num(d.circuit.r_damp) << "             # series damping, ohm\n"
     << "f_sw = " << num(d.f_sw) << "                         # switching frequency, Hz\n"
     << "m = " << num(d.m) << "                               # modulation index\n"
     << "i_load = " << num(d.load_current) << "               # constant-current load, A\n"
     << "duration = " << num(d.duration) << "                 # simulated time, s\n"
     << "steps_per_period = " << d.steps_per_period << "\n"
     << "scheme = " << scheme_name(d.scheme) << "\n";
  return os.str();
}

std::string default_config_text() { return config_text(SimConfig{}); }

}  // namespace tpts
