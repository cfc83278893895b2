#include "tpts/trace_io.hpp"

#include <cstdio>
#include <fstream>

#include "tpts/errors.hpp"

namespace tpts {

std::string trace_to_csv(const Trace& trace) {
  std::string out;
  out.reserve(trace.size() * 320 + 64);
  out += kTraceHeader;
  out += '\n';
  char buf[64];
  const auto put = [&](double v, char sep) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
    out.append(buf, static_cast<size_t>(n));
  };
  for (size_t i = 0; i < trace.size(); ++i) {
    const SimState& s = trace.states[i];
    put(trace.t[i], ',');
    for (Phase p : {Phase::A, Phase::B, Phase::C}) put(trace.v_grid[i][p], ',');
    for (Phase p : {Phase::A, Phase::B, Phase::C}) put(trace.i_ref[i][p], ',');
    for (Phase p : {Phase::A, Phase::B, Phase::C}) {
      out += trace.gates[i].on(p) ? '1' : '0';
      out += ',';
    }
    for (Phase p : {Phase::A, Phase::B, Phase::C}) put(trace.i_rect[i][p], ',');
    for (Phase p : {Phase::A, Phase::B, Phase::C}) put(s.i_filter[p], ',');
    put(s.i_dc, ',');
    put(s.v_out, '\n');
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(errc::config, "cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) fail(errc::config, "write to '" + path + "' failed");
}

}  // namespace tpts
