// Batch driver for the conditional-handover simulator.
//
//   cho_sim run --config FILE [--set key=value]... [--out DIR] [--trace] [--parallel N] [--quiet]
//   cho_sim plot --csv FILE --figure kpi_bars|recovery_curve [--out DIR]
//   cho_sim replay --events FILE --config FILE [--set key=value]...
//   cho_sim defaults
//
// Exit codes: 0 success, 2 configuration or input error, 3 invariant violation.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <fstream>
#include <iostream>

#include "cho/config.hpp"
#include "cho/events.hpp"
#include "cho/kpi.hpp"
#include "cho/simulation.hpp"
#include "cho/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

cho::Config load(const std::string& path, const std::vector<std::string>& overrides) {
  cho::Config cfg = path.empty() ? cho::Config{} : cho::load_config(path);
  cho::apply_overrides(cfg, overrides);
  cho::validate(cfg);
  return cfg;
}

int cmd_run(const std::string& config, const std::vector<std::string>& overrides,
            const std::string& out, bool trace, int parallel, bool quiet) {
  const auto cfg = load(config, overrides);
  const auto runs = cho::sweep::expand(cfg);
  if (!quiet) std::cerr << fmt::format("{} run(s), output in {}\n", runs.size(), out);

  std::size_t done = 0;
  const auto t0 = std::chrono::steady_clock::now();
  cho::sweep::SweepOptions opts;
  opts.parallel = parallel;
  opts.trace = trace;
  opts.out_dir = out;
  if (!quiet) {
    opts.on_run_done = [&](const cho::sim::RunResult& r) {
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << fmt::format("[{}/{}] {:7.1f}s  {}\n", ++done, runs.size(), secs,
                               cho::sweep::csv_row(r.report));
    };
  }
  cho::sweep::run_sweep(cfg, opts);
  return 0;
}

int cmd_plot(const std::string& csv, const std::string& figure, const std::string& out) {
  const auto fig = figure == "kpi_bars" ? cho::sweep::Figure::KpiBars
                                        : cho::sweep::Figure::RecoveryCurve;
  for (const auto& p : cho::sweep::emit_plot_data(csv, fig, out)) std::cout << p.string() << "\n";
  return 0;
}

int cmd_replay(const std::string& events_path, const std::string& config,
               const std::vector<std::string>& overrides) {
  const auto cfg = load(config, overrides);
  std::ifstream f(events_path);
  if (!f) throw cho::ConfigError(fmt::format("cannot open event log '{}'", events_path));
  cho::kpi::KpiAggregator agg(cfg.kpi);
  agg.ingest_all(cho::read_event_log(f));
  agg.finish(cfg.scenario.duration());
  const auto report = cho::kpi::normalize(agg.counters(), cfg.scenario.n_ues,
                                          cfg.scenario.sim_duration_s, cho::sim::key_of(cfg));
  std::cout << cho::sweep::kCsvHeader << "\n" << cho::sweep::csv_row(report) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional handover system-level simulator"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  std::string out = "out";
  bool trace = false;
  bool quiet = false;
  int parallel = 1;
  auto* run = app.add_subcommand("run", "Run a single simulation or a parameter sweep");
  run->add_option("--config", config, "Configuration file")->check(CLI::ExistingFile);
  run->add_option("--set", overrides, "Override a key: --set scenario.n_ues=100");
  run->add_option("--out", out, "Output directory")->capture_default_str();
  run->add_flag("--trace", trace, "Write one event log per run");
  run->add_option("--parallel", parallel, "Concurrent runs")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "No progress output");

  std::string csv;
  std::string figure = "kpi_bars";
  std::string plot_out = "plots";
  auto* plot = app.add_subcommand("plot", "Aggregate results.csv into plot-ready files");
  plot->add_option("--csv", csv, "results.csv from a run")->required()->check(CLI::ExistingFile);
  plot->add_option("--figure", figure, "kpi_bars or recovery_curve")
      ->check(CLI::IsMember({"kpi_bars", "recovery_curve"}))
      ->capture_default_str();
  plot->add_option("--out", plot_out, "Output directory")->capture_default_str();

  std::string events;
  auto* replay = app.add_subcommand("replay", "Recompute a CSV row from a run's event log");
  replay->add_option("--events", events, "Event log (.tsv)")->required()->check(CLI::ExistingFile);
  replay->add_option("--config", config, "Configuration the run used")->check(CLI::ExistingFile);
  replay->add_option("--set", overrides, "Override a key");

  auto* defaults = app.add_subcommand("defaults", "Print every configuration key with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config, overrides, out, trace, parallel, quiet);
    if (*plot) return cmd_plot(csv, figure, plot_out);
    if (*replay) return cmd_replay(events, config, overrides);
    if (*defaults) {
      std::cout << cho::dump_config(cho::Config{});
      return 0;
    }
  } catch (const cho::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cho::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
