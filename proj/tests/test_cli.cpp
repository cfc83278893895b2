#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "tpts/config.hpp"
#include "tpts/errors.hpp"
#include "tpts/trace_io.hpp"

using namespace tpts;

TEST_CASE("empty config yields the hardware defaults") {
  const SimConfig cfg = parse_config("");
  CHECK(cfg.grid.v_line_line_peak == 245.0);
  CHECK(cfg.grid.f_grid == 50.0);
  CHECK(cfg.circuit.l_in == 230e-6);
  CHECK(cfg.circuit.r_l_in == 0.1);
  CHECK(cfg.circuit.c_in == 6.8e-6);
  CHECK(cfg.circuit.l_out == 1e-3);
  CHECK(cfg.circuit.c_out == 150e-6);
  CHECK(cfg.f_sw == 18e3);
  CHECK(cfg.load_current == 5.0);
  CHECK(cfg.scheme == Scheme::pattern_i);
}

TEST_CASE("config parsing") {
  SUBCASE("overrides and comments") {
    const SimConfig cfg = parse_config(
        "# comment line\n"
        "f_sw = 36000   # halves the switching period\n"
        "scheme = pattern2\n"
        "\n"
        "m = 0.7\n");
    CHECK(cfg.f_sw == 36000.0);
    CHECK(cfg.switching_period() == doctest::Approx(1.0 / 36000.0));
    CHECK(cfg.scheme == Scheme::pattern_ii);
    CHECK(cfg.m == 0.7);
  }
  SUBCASE("overmodulation is a named error") {
    try {
      parse_config("m = 1.5\n");
      FAIL("expected a config error");
    } catch (const error& e) {
      CHECK(e.code() == errc::overmodulation);
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }
  SUBCASE("unknown key names the key and line") {
    try {
      parse_config("f_grid = 50\nfsw = 18000\n");
      FAIL("expected a config error");
    } catch (const error& e) {
      CHECK(e.code() == errc::config);
      CHECK(std::string(e.what()).find("fsw") != std::string::npos);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("non-numeric value is rejected") {
    CHECK_THROWS_AS(parse_config("m = fast\n"), error);
  }
  SUBCASE("unknown scheme is rejected") {
    CHECK_THROWS_AS(parse_config("scheme = sinusoidal\n"), error);
  }
  SUBCASE("missing equals sign is rejected") {
    CHECK_THROWS_AS(parse_config("duration 0.06\n"), error);
  }
  SUBCASE("steps_per_period range") {
    CHECK_THROWS_AS(parse_config("steps_per_period = 10\n"), error);
  }
}

TEST_CASE("apply_override") {
  SimConfig cfg;
  apply_override(cfg, "m=0.9");
  CHECK(cfg.m == 0.9);
  apply_override(cfg, "scheme=svm");
  CHECK(cfg.scheme == Scheme::svm);
  CHECK_THROWS_AS(apply_override(cfg, "m"), error);
  CHECK_THROWS_AS(apply_override(cfg, "bogus=1"), error);
}

TEST_CASE("default config text round-trips") {
  const SimConfig parsed = parse_config(default_config_text());
  const SimConfig d;
  CHECK(parsed.grid.v_line_line_peak == d.grid.v_line_line_peak);
  CHECK(parsed.circuit.c_in == d.circuit.c_in);
  CHECK(parsed.f_sw == d.f_sw);
  CHECK(parsed.m == d.m);
  CHECK(parsed.steps_per_period == d.steps_per_period);
  CHECK(parsed.scheme == d.scheme);
}

TEST_CASE("serialized configs round-trip exactly") {
  SimConfig cfg;
  cfg.m = 0.73;
  cfg.f_sw = 21500.0;
  cfg.grid.phase_offset = -0.37;
  cfg.circuit.r_damp = 0.47;
  cfg.scheme = Scheme::svm;
  cfg.steps_per_period = 321;
  const SimConfig parsed = parse_config(config_text(cfg));
  CHECK(parsed.m == cfg.m);
  CHECK(parsed.f_sw == cfg.f_sw);
  CHECK(parsed.grid.phase_offset == cfg.grid.phase_offset);
  CHECK(parsed.circuit.r_damp == cfg.circuit.r_damp);
  CHECK(parsed.scheme == cfg.scheme);
  CHECK(parsed.steps_per_period == cfg.steps_per_period);
}

TEST_CASE("trace csv is byte-identical across repeated runs") {
  SimConfig cfg;
  cfg.duration = 4.0 / cfg.f_sw;  // four switching periods
  cfg.steps_per_period = 40;
  const std::string csv1 = trace_to_csv(run_simulation(cfg));
  const std::string csv2 = trace_to_csv(run_simulation(cfg));
  CHECK(csv1 == csv2);
  CHECK(csv1.substr(0, csv1.find('\n')) == std::string(kTraceHeader));
  // 18 columns per row
  const size_t header_end = csv1.find('\n');
  const size_t row_end = csv1.find('\n', header_end + 1);
  const std::string row = csv1.substr(header_end + 1, row_end - header_end - 1);
  int commas = 0;
  for (char ch : row)
    if (ch == ',') ++commas;
  CHECK(commas == 17);
}
