#include "cho/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace cho::sweep {

namespace {

template <typename T>
std::vector<T> axis_or(const std::vector<T>& axis, T fallback) {
  return axis.empty() ? std::vector<T>{fallback} : axis;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::string_view col) {
  if (s == "nan") return std::nan("");
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("results CSV: bad value '{}' in column {}", s, col));
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  f << text;
}

}  // namespace

std::vector<Config> expand(const Config& base) {
  const auto& s = base.scenario;
  const auto& sw = base.sweep;
  std::vector<Config> runs;
  for (double speed : axis_or(sw.speeds_kmh, s.ue_speed_kmh))
    for (HoMode mode : axis_or(sw.modes, s.mode))
      for (double o_prep : axis_or(sw.o_prep_values, s.o_prep_db))
        for (double o_exec : axis_or(sw.o_exec_values, s.o_exec_db))
          for (int max_prep : axis_or(sw.max_prepared_values, s.max_prepared))
            for (std::uint64_t seed : axis_or(sw.seeds, s.seed)) {
              Config c = base;
              c.sweep = {};
              c.scenario.ue_speed_kmh = speed;
              c.scenario.mode = mode;
              c.scenario.o_prep_db = o_prep;
              c.scenario.o_exec_db = o_exec;
              c.scenario.max_prepared = max_prep;
              c.scenario.seed = seed;
              runs.push_back(std::move(c));
            }
  std::stable_sort(runs.begin(), runs.end(),
                   [](const Config& a, const Config& b) { return sim::key_of(a) < sim::key_of(b); });
  return runs;
}

std::string csv_row(const kpi::KpiReport& r) {
  const auto& k = r.key;
  return fmt::format("{},{},{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{:.3f}", to_string(k.mode),
                     k.speed_kmh, k.o_prep_db, k.o_exec_db, k.max_prepared, k.seed,
                     r.ho_succ_per_ue_min, r.all_fail_per_ue_min, r.pp_per_ue_min,
                     r.cho_recovery_rate, r.rlf_count, r.hof_count, r.prepared_cell_seconds);
}

std::string format_csv(std::vector<kpi::KpiReport> reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const auto& a, const auto& b) { return a.key < b.key; });
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : reports) out += csv_row(r) + "\n";
  return out;
}

std::string event_log_name(const kpi::RunKey& k) {
  return fmt::format("events_{}_v{}_prep{}_exec{}_max{}_seed{}.tsv", to_string(k.mode), k.speed_kmh,
                     k.o_prep_db, k.o_exec_db, k.max_prepared, k.seed);
}

std::vector<kpi::KpiReport> run_sweep(const Config& base, const SweepOptions& opts) {
  const auto runs = expand(base);
  for (const auto& r : runs) validate(r);
  std::filesystem::create_directories(opts.out_dir);

  std::vector<kpi::KpiReport> reports(runs.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      try {
        auto result = sim::run_simulation(runs[i], {.keep_events = opts.trace});
        if (opts.trace) {
          std::ofstream f(opts.out_dir / event_log_name(result.key), std::ios::binary);
          write_event_log(f, result.events);
        }
        reports[i] = result.report;
        if (opts.on_run_done) {
          std::lock_guard lock(callback_mutex);
          opts.on_run_done(result);
        }
      } catch (...) {
        std::lock_guard lock(callback_mutex);
        if (!first_error) first_error = std::current_exception();
        next = runs.size();
        return;
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(opts.parallel, static_cast<int>(runs.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  write_file(opts.out_dir / "results.csv", format_csv(reports));
  std::stable_sort(reports.begin(), reports.end(),
                   [](const auto& a, const auto& b) { return a.key < b.key; });
  return reports;
}

std::vector<kpi::KpiReport> read_results_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot open results CSV '{}'", path.string()));
  std::string line;
  if (!std::getline(f, line)) throw ConfigError("results CSV is empty");
  const auto header = split_csv_line(line);

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  const auto required = split_csv_line(kCsvHeader);
  for (const auto& name : required)
    if (!col.count(name)) throw ConfigError(fmt::format("results CSV: missing column '{}'", name));

  std::vector<kpi::KpiReport> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ConfigError(fmt::format("results CSV: row has {} fields, header has {}", cells.size(),
                                    header.size()));
    auto get = [&](const std::string& name) -> const std::string& { return cells[col.at(name)]; };
    auto num = [&](const std::string& name) { return parse_double(get(name), name); };

    kpi::KpiReport r;
    const auto mode = parse_mode(get("mode"));
    if (!mode) throw ConfigError(fmt::format("results CSV: bad mode '{}'", get("mode")));
    r.key.mode = *mode;
    r.key.speed_kmh = num("speed_kmh");
    r.key.o_prep_db = num("o_prep_db");
    r.key.o_exec_db = num("o_exec_db");
    r.key.max_prepared = static_cast<int>(num("max_prepared"));
    r.key.seed = static_cast<std::uint64_t>(num("seed"));
    r.ho_succ_per_ue_min = num("ho_succ_per_ue_min");
    r.all_fail_per_ue_min = num("all_fail_per_ue_min");
    r.pp_per_ue_min = num("pp_per_ue_min");
    r.cho_recovery_rate = num("cho_recovery_rate");
    r.rlf_count = static_cast<std::uint64_t>(num("rlf_count"));
    r.hof_count = static_cast<std::uint64_t>(num("hof_count"));
    r.prepared_cell_seconds = num("prepared_cell_seconds");
    out.push_back(r);
  }
  return out;
}

std::vector<BarGroup> kpi_bars(const std::vector<kpi::KpiReport>& reports) {
  using Key = std::tuple<HoMode, double, double, double, int>;
  std::map<Key, BarGroup> groups;
  for (const auto& r : reports) {
    const Key key{r.key.mode, r.key.speed_kmh, r.key.o_prep_db, r.key.o_exec_db, r.key.max_prepared};
    auto& g = groups[key];
    g.mode = r.key.mode;
    g.speed_kmh = r.key.speed_kmh;
    g.o_prep_db = r.key.o_prep_db;
    g.o_exec_db = r.key.o_exec_db;
    g.max_prepared = r.key.max_prepared;
    ++g.n_runs;
    g.ho_succ += r.ho_succ_per_ue_min;
    g.all_fail += r.all_fail_per_ue_min;
    g.pp += r.pp_per_ue_min;
  }
  std::vector<BarGroup> out;
  for (auto& [key, g] : groups) {
    g.ho_succ /= g.n_runs;
    g.all_fail /= g.n_runs;
    g.pp /= g.n_runs;
    out.push_back(g);
  }
  return out;
}

std::vector<CurvePoint> recovery_curve(const std::vector<kpi::KpiReport>& reports) {
  using Key = std::tuple<double, double, double, int>;
  std::map<Key, CurvePoint> points;
  for (const auto& r : reports) {
    if (r.key.mode != HoMode::CHO) continue;
    const Key key{r.key.speed_kmh, r.key.o_prep_db, r.key.o_exec_db, r.key.max_prepared};
    auto& p = points[key];
    p.speed_kmh = r.key.speed_kmh;
    p.o_prep_db = r.key.o_prep_db;
    p.o_exec_db = r.key.o_exec_db;
    p.max_prepared = r.key.max_prepared;
    if (std::isnan(r.cho_recovery_rate)) continue;
    ++p.n_runs;
    p.recovery_rate += r.cho_recovery_rate;
  }
  std::vector<CurvePoint> out;
  for (auto& [key, p] : points) {
    p.recovery_rate = p.n_runs > 0 ? p.recovery_rate / p.n_runs : std::nan("");
    out.push_back(p);
  }
  return out;
}

std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& csv_path,
                                                  Figure figure,
                                                  const std::filesystem::path& out_dir) {
  const auto reports = read_results_csv(csv_path);
  std::filesystem::create_directories(out_dir);

  if (figure == Figure::KpiBars) {
    const auto dat = out_dir / "kpi_bars.dat";
    const auto gp = out_dir / "kpi_bars.gp";
    std::string text =
        "# label mode speed_kmh o_prep_db o_exec_db max_prepared n_runs ho_succ all_fail pp\n";
    for (const auto& g : kpi_bars(reports)) {
      const std::string label =
          g.mode == HoMode::BHO ? fmt::format("BHO@{}kmh", g.speed_kmh)
                                : fmt::format("CHO({},{})x{}@{}kmh", g.o_prep_db, g.o_exec_db,
                                              g.max_prepared, g.speed_kmh);
      text += fmt::format("\"{}\" {} {} {} {} {} {} {:.6f} {:.6f} {:.6f}\n", label, to_string(g.mode),
                          g.speed_kmh, g.o_prep_db, g.o_exec_db, g.max_prepared, g.n_runs,
                          g.ho_succ, g.all_fail, g.pp);
    }
    write_file(dat, text);
    write_file(gp,
               "# gnuplot -p kpi_bars.gp\n"
               "set style data histograms\n"
               "set style histogram clustered gap 1\n"
               "set style fill solid 0.8 border -1\n"
               "set ylabel 'events per UE per minute'\n"
               "set xtics rotate by -45\n"
               "set key top left\n"
               "plot 'kpi_bars.dat' using 8:xtic(1) title 'HOSucc', \\\n"
               "     '' using 9 title 'AllMobilityFail', \\\n"
               "     '' using 10 title 'PP'\n");
    return {dat, gp};
  }

  const auto dat = out_dir / "recovery_curve.dat";
  const auto gp = out_dir / "recovery_curve.gp";
  std::string text;
  std::string plot_cmd = "plot ";
  int index = 0;
  std::tuple<double, double, double> current{-1, -1, -1};
  for (const auto& p : recovery_curve(reports)) {
    const std::tuple<double, double, double> series{p.speed_kmh, p.o_prep_db, p.o_exec_db};
    if (series != current) {
      if (index > 0) {
        text += "\n\n";
        plot_cmd += ", \\\n     ";
      }
      current = series;
      text += fmt::format("# series speed_kmh={} o_prep_db={} o_exec_db={}\n", p.speed_kmh,
                          p.o_prep_db, p.o_exec_db);
      text += "# max_prepared recovery_rate n_runs\n";
      plot_cmd += fmt::format(
          "'recovery_curve.dat' index {} using 1:($2*100) with linespoints title "
          "'{} km/h, o_prep {} dB, o_exec {} dB'",
          index, p.speed_kmh, p.o_prep_db, p.o_exec_db);
      ++index;
    }
    text += fmt::format("{} {:.6f} {}\n", p.max_prepared, p.recovery_rate, p.n_runs);
  }
  write_file(dat, text);
  write_file(gp, "# gnuplot -p recovery_curve.gp\n"
                 "set xlabel 'max prepared CHO cells'\n"
                 "set ylabel 'CHO recovery rate [%]'\n"
                 "set logscale x 2\n"
                 "set yrange [0:100]\n" +
                     (index > 0 ? plot_cmd + "\n" : std::string("# no CHO rows\n")));
  return {dat, gp};
}

}  // namespace cho::sweep
