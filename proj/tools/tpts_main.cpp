#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpts/analysis.hpp"
#include "tpts/config.hpp"
#include "tpts/errors.hpp"
#include "tpts/selftest.hpp"
#include "tpts/simulator.hpp"
#include "tpts/trace_io.hpp"

namespace fs = std::filesystem;
using namespace tpts;

namespace {

struct RunSpec {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  uint64_t seed = kDefaultSelftestSeed;
  std::string sweep_key = "m";
  std::string sweep_values = "0.1,0.3,0.5,0.7,0.9";
};

SimConfig load_config(const RunSpec& spec) {
  SimConfig cfg;
  if (!spec.config_path.empty()) {
    std::ifstream f(spec.config_path);
    if (!f) fail(errc::config, "cannot read config file '" + spec.config_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    cfg = parse_config(ss.str());
  }
  for (const std::string& ov : spec.overrides) apply_override(cfg, ov);
  return cfg;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(errc::config, "cannot create output directory '" + dir + "'");
}

int cmd_simulate(const RunSpec& spec) {
  const SimConfig cfg = load_config(spec);
  ensure_dir(spec.out_dir);
  const Trace trace = run_simulation(cfg);
  const MetricsReport metrics = compute_metrics(trace, cfg);
  write_file((fs::path(spec.out_dir) / "config.txt").string(), config_text(cfg));
  write_file((fs::path(spec.out_dir) / "trace.csv").string(), trace_to_csv(trace));
  write_file((fs::path(spec.out_dir) / "metrics.txt").string(), format_metrics(metrics));
  std::cout << format_metrics(metrics);
  std::cout << "wrote " << (fs::path(spec.out_dir) / "trace.csv").string() << " ("
            << trace.size() << " samples)\n";
  return 0;
}

int cmd_compare(const RunSpec& spec) {
  SimConfig cfg = load_config(spec);
  ensure_dir(spec.out_dir);
  std::array<MetricsReport, 3> reports;
  std::array<OpCounters, 3> counters;
  const Scheme schemes[3] = {Scheme::pattern_i, Scheme::pattern_ii, Scheme::svm};
  for (int i = 0; i < 3; ++i) {
    cfg.scheme = schemes[i];
    const Trace trace = run_simulation(cfg);
    reports[static_cast<size_t>(i)] = compute_metrics(trace, cfg);
    counters[static_cast<size_t>(i)] = reports[static_cast<size_t>(i)].op_counters;
  }

  std::ostringstream os;
  os << "comparison at m = " << cfg.m << ", f_sw = " << cfg.f_sw << " Hz, load "
     << cfg.load_current << " A\n\n";
  os << resource_report(counters) << "\n";
  os << "metric                    pattern1     pattern2          svm\n";
  char buf[160];
  const auto row = [&](const char* name, auto get) {
    std::snprintf(buf, sizeof buf, "%-22s %12.6f %12.6f %12.6f\n", name,
                  get(reports[0]), get(reports[1]), get(reports[2]));
    os << buf;
  };
  row("fundamental A [A]", [](const MetricsReport& r) { return r.source_current[0].fund.amplitude; });
  row("thd A (h<=50)", [](const MetricsReport& r) { return r.source_current[0].thd_low; });
  row("tracking rms [A]", [](const MetricsReport& r) { return r.tracking_error_rms; });
  row("clamp fraction A", [](const MetricsReport& r) { return r.clamp_fraction.a; });
  row("clamp fraction B", [](const MetricsReport& r) { return r.clamp_fraction.b; });
  row("clamp fraction C", [](const MetricsReport& r) { return r.clamp_fraction.c; });
  row("transitions/period", [](const MetricsReport& r) {
    return static_cast<double>(std::max({r.transitions_per_period[0], r.transitions_per_period[1],
                                         r.transitions_per_period[2]}));
  });
  row("mean v_out [V]", [](const MetricsReport& r) { return r.mean_v_out; });
  row("mean i_dc [A]", [](const MetricsReport& r) { return r.mean_i_dc; });
  const std::string text = os.str();
  write_file((fs::path(spec.out_dir) / "compare.txt").string(), text);
  std::cout << text;
  return 0;
}

int cmd_sweep(const RunSpec& spec) {
  const SimConfig base = load_config(spec);
  ensure_dir(spec.out_dir);
  std::vector<double> values;
  std::stringstream ss{spec.sweep_values};
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) values.push_back(std::stod(tok));
  if (values.empty()) fail(errc::config, "sweep needs at least one value");

  struct Point {
    double value;
    std::string dir;
    MetricsReport metrics;
  };
  std::vector<std::future<Point>> futures;
  for (size_t i = 0; i < values.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      SimConfig cfg = base;
      apply_override(cfg, spec.sweep_key + "=" + std::to_string(values[i]));
      char name[64];
      std::snprintf(name, sizeof name, "point_%03zu", i);
      const fs::path dir = fs::path(spec.out_dir) / name;
      fs::create_directories(dir);
      const Trace trace = run_simulation(cfg);
      const MetricsReport metrics = compute_metrics(trace, cfg);
      write_file((dir / "config.txt").string(), config_text(cfg));
      write_file((dir / "trace.csv").string(), trace_to_csv(trace));
      write_file((dir / "metrics.txt").string(), format_metrics(metrics));
      return Point{values[i], name, metrics};
    }));
  }

  std::ostringstream csv;
  csv << "point," << spec.sweep_key
      << ",fund_a_amp,fund_a_phase_deg,thd_a,tracking_rms,mean_v_out,mean_i_dc\n";
  char buf[256];
  for (auto& f : futures) {
    const Point p = f.get();
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  p.dir.c_str(), p.value, p.metrics.source_current[0].fund.amplitude,
                  p.metrics.source_current[0].fund.phase * 180.0 / kPi,
                  p.metrics.source_current[0].thd_low, p.metrics.tracking_error_rms,
                  p.metrics.mean_v_out, p.metrics.mean_i_dc);
    csv << buf;
  }
  write_file((fs::path(spec.out_dir) / "summary.csv").string(), csv.str());
  std::cout << "swept " << values.size() << " points over '" << spec.sweep_key << "', summary in "
            << (fs::path(spec.out_dir) / "summary.csv").string() << "\n";
  return 0;
}

int cmd_selftest(const RunSpec& spec) {
  std::cout << "selftest seed: " << spec.seed << "\n";
  const auto results = run_selftest(spec.seed);
  bool all = true;
  for (const PropertyResult& r : results) {
    std::printf("%-4s %-32s %6.2f s  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modulation engine and switched simulator for the three-phase three-switch "
               "buck rectifier"};
  app.require_subcommand(1);
  RunSpec spec;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", spec.config_path, "key = value configuration file");
    sub->add_option("--out", spec.out_dir, "output directory");
    sub->add_option("--set", spec.overrides, "config override key=value (repeatable)");
    sub->add_option("--seed", spec.seed, "rng seed for the self test");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run one simulation, write trace + metrics");
  add_common(simulate);
  CLI::App* compare = app.add_subcommand("compare", "run all three schemes at one operating point");
  add_common(compare);
  CLI::App* sweep = app.add_subcommand("sweep", "simulate a list of values for one config key");
  add_common(sweep);
  sweep->add_option("--key", spec.sweep_key, "config key to sweep (default m)");
  sweep->add_option("--values", spec.sweep_values, "comma-separated values");
  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant property suite");
  add_common(selftest);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(spec);
    if (compare->parsed()) return cmd_compare(spec);
    if (sweep->parsed()) return cmd_sweep(spec);
    if (selftest->parsed()) return cmd_selftest(spec);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
