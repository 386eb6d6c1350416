// Command-line front end: ingest OSV snapshots, build the five series,
// select lag orders, fit ARDL models and emit the diagnostics battery.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "malseries/ardl.hpp"
#include "malseries/csv.hpp"
#include "malseries/diagnostics.hpp"
#include "malseries/osv.hpp"
#include "malseries/selection.hpp"
#include "malseries/series.hpp"
#include "malseries/stats.hpp"

namespace fs = std::filesystem;
using namespace malseries;

namespace {

constexpr int kExitIngest = 2;
constexpr int kExitSelection = 3;
constexpr int kExitNumerical = 4;

struct RunConfig {
  std::string snapshot;
  std::string events;
  std::string series;
  std::string window_start = "2022-01-01";
  std::string window_end = "2025-03-31";
  std::vector<std::string> granularities = {"daily", "weekly", "monthly"};
  std::string target = "both";
  std::string orders_text;
  int p_max = 30;
  std::string output_dir = "out";
  unsigned long long seed = 42;
  int dm_horizon = 50;
  int sim_length = 500;
};

Date need_date(const std::string& text, const char* what) {
  auto d = parse_date(text);
  if (!d) throw CLI::ValidationError(std::string(what) + ": bad date " + text);
  return *d;
}

std::vector<Target> targets_of(const std::string& t) {
  if (t == "freq") return {Target::MalFreq};
  if (t == "share") return {Target::MalShare};
  if (t == "both") return {Target::MalFreq, Target::MalShare};
  throw CLI::ValidationError("target must be freq, share or both");
}

ArdlOrders parse_orders(const std::string& text) {
  auto parts = split_csv_line(text);
  if (parts.size() != 4) throw CLI::ValidationError("orders must be p1,p2,p3,p4");
  return ArdlOrders{std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2]),
                    std::stoi(parts[3])};
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_breakdown_csv(const fs::path& path, std::span<const EcosystemBreakdownRow> rows) {
  std::string text = "ecosystem,all_entries,malware_entries,malware_share\n";
  for (const auto& r : rows) {
    text += std::string(to_string(r.ecosystem)) + ',' + std::to_string(r.all_entries) +
            ',' + std::to_string(r.malware_entries) + ',' + format_double(r.malware_share) +
            '\n';
  }
  write_text(path, text);
}

void write_descriptive_csv(const fs::path& path, const DescriptiveReport& rep) {
  auto line = [](const char* name, const SeriesSummary& s) {
    return std::string(name) + ',' + format_double(s.median) + ',' +
           format_double(s.mean) + ',' + format_double(s.min) + ',' +
           format_double(s.max) + '\n';
  };
  std::string text = "series,median,mean,min,max\n";
  text += line("mal_freq", rep.mal_freq);
  text += line("mal_share", rep.mal_share);
  text += line("eco", rep.eco);
  text += line("adv", rep.adv);
  text += line("art", rep.art);
  write_text(path, text);
}

void write_moving_avg_csv(const fs::path& path, const SeriesBundle& bundle,
                          const DescriptiveReport& rep) {
  std::string text = "period,mal_share,moving_avg\n";
  for (size_t t = 0; t < bundle.size(); ++t)
    text += bundle.periods[t] + ',' + format_double(bundle.mal_share[t]) + ',' +
            format_double(rep.mal_share_moving_avg[t]) + '\n';
  write_text(path, text);
}

SeriesBundle load_series(const RunConfig& cfg) {
  if (cfg.series.empty()) throw CLI::ValidationError("--series is required");
  return read_series_csv(cfg.series);
}

std::vector<EventRow> load_events(const RunConfig& cfg) {
  if (!cfg.events.empty()) return read_events_csv(cfg.events);
  if (!cfg.snapshot.empty()) return scan_snapshot(cfg.snapshot);
  fs::path fallback = fs::path(cfg.output_dir) / "events.csv";
  if (fs::exists(fallback)) return read_events_csv(fallback.string());
  throw CLI::ValidationError("need --events or --snapshot");
}

// ---- model output helpers ----------------------------------------------

struct ModelOutput {
  Granularity granularity;
  Target target;
  ArdlOrders orders;
  ArdlFit fit;
  std::array<MultiplierResult, 3> lrm;
  TestResult jb;
  AdfResult adf_target;
  TestResult lb;
  double exceedance = -1;  // share targets only
};

void write_model_files(const fs::path& dir, const ModelOutput& m,
                       const SelectionTrace* trace, int dm_horizon) {
  if (trace) write_text(dir / "trace.jsonl", trace_to_jsonl(*trace));
  write_text(dir / "fit.json", fit_to_json(m.fit) + "\n");

  std::string lrm_text = "regressor,value,std_error,significant\n";
  for (const auto& r : m.lrm)
    lrm_text += std::string(to_string(r.regressor)) + ',' + format_double(r.value) + ',' +
                format_double(r.std_error) + ',' + (r.significant_95 ? "true" : "false") +
                '\n';
  write_text(dir / "lrm.csv", lrm_text);

  for (Regressor reg : {Regressor::Eco, Regressor::Adv, Regressor::Art}) {
    auto dm = dynamic_multipliers(m.fit, reg, dm_horizon);
    std::string text = "step,value\n";
    for (size_t i = 0; i < dm.size(); ++i)
      text += std::to_string(i) + ',' + format_double(dm[i]) + '\n';
    write_text(dir / ("dm_" + std::string(to_string(reg)) + ".csv"), text);
  }

  const auto& res = m.fit.residuals;
  AcfResult a = acf(res, default_acf_max_lag(res.size()));
  std::string acf_text = "lag,acf,band\n";
  for (int l = 1; l <= a.max_lag; ++l)
    acf_text += std::to_string(l) + ',' + format_double(a.values[static_cast<size_t>(l - 1)]) +
                ',' + format_double(a.band) + '\n';
  write_text(dir / "acf.csv", acf_text);

  std::string qq_text = "theoretical,sample\n";
  for (const auto& [q, s] : qq_points(res))
    qq_text += format_double(q) + ',' + format_double(s) + '\n';
  write_text(dir / "qq.csv", qq_text);

  std::string fr_text = "index,fitted,residual,observed\n";
  for (size_t i = 0; i < res.size(); ++i)
    fr_text += std::to_string(i) + ',' + format_double(m.fit.fitted[i]) + ',' +
               format_double(res[i]) + ',' + format_double(m.fit.fitted[i] + res[i]) + '\n';
  write_text(dir / "fitted_residuals.csv", fr_text);

  nlohmann::ordered_json tests;
  tests["jarque_bera"] = {{"statistic", m.jb.statistic},
                          {"p_value", m.jb.p_value},
                          {"reject_at_95", m.jb.reject_at_95}};
  tests["ljung_box"] = {{"statistic", m.lb.statistic},
                        {"p_value", m.lb.p_value},
                        {"reject_at_95", m.lb.reject_at_95}};
  tests["adf_target"] = {{"statistic", m.adf_target.statistic},
                         {"p_value", m.adf_target.p_value},
                         {"lags", m.adf_target.lags},
                         {"critical_5", m.adf_target.critical_5},
                         {"reject_at_95", m.adf_target.reject_at_95}};
  if (m.exceedance >= 0) tests["share_exceedance_percent"] = m.exceedance;
  write_text(dir / "tests.json", tests.dump(2) + "\n");
}

ModelOutput run_model(const SeriesBundle& bundle, Target target, const ArdlOrders& orders) {
  ModelOutput m;
  m.granularity = bundle.granularity;
  m.target = target;
  m.orders = orders;
  Transform f = default_transform(target);
  m.fit = fit_ardl(bundle, target, orders, f);
  int i = 0;
  for (Regressor reg : {Regressor::Eco, Regressor::Adv, Regressor::Art})
    m.lrm[static_cast<size_t>(i++)] = long_run_multiplier(m.fit, reg);
  m.jb = jarque_bera(m.fit.residuals);
  m.lb = ljung_box(m.fit.residuals, default_acf_max_lag(m.fit.residuals.size()));

  std::vector<double> y(bundle.size());
  for (size_t t = 0; t < bundle.size(); ++t) {
    double raw = target == Target::MalFreq ? static_cast<double>(bundle.mal_freq[t])
                                           : bundle.mal_share[t];
    y[t] = apply_transform(f, raw);
  }
  m.adf_target = adf_test(y);
  if (target == Target::MalShare) m.exceedance = share_exceedance(m.fit);
  return m;
}

// ---- subcommands --------------------------------------------------------

int cmd_ingest(const RunConfig& cfg) {
  if (cfg.snapshot.empty()) throw CLI::ValidationError("ingest needs --snapshot");
  ScanStats stats;
  std::vector<EventRow> rows;
  try {
    rows = scan_snapshot(cfg.snapshot, &stats);
  } catch (const std::exception& e) {
    std::cerr << "ingest failed: " << e.what() << "\n";
    return kExitIngest;
  }
  fs::create_directories(cfg.output_dir);
  write_events_csv((fs::path(cfg.output_dir) / "events.csv").string(), rows);
  write_breakdown_csv(fs::path(cfg.output_dir) / "breakdown.csv", ecosystem_breakdown(rows));
  std::cout << "files seen: " << stats.files_seen << "\n"
            << "records parsed: " << stats.records_parsed << "\n"
            << "dropped (other ecosystem): " << stats.dropped_other_ecosystem << "\n"
            << "skipped (unreadable): " << stats.skipped_unreadable << "\n"
            << "event rows: " << rows.size() << "\n";
  return 0;
}

int cmd_build(const RunConfig& cfg) {
  auto rows = load_events(cfg);
  Date start = need_date(cfg.window_start, "window-start");
  Date end = need_date(cfg.window_end, "window-end");
  for (const auto& g : cfg.granularities) {
    auto gran = parse_granularity(g);
    if (!gran) throw CLI::ValidationError("unknown granularity " + g);
    SeriesBundle b = aggregate(rows, *gran, start, end);
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    write_series_csv((dir / ("series_" + g + ".csv")).string(), b);
    DescriptiveReport rep = descriptive_report(b);
    write_descriptive_csv(dir / ("descriptive_" + g + ".csv"), rep);
    write_moving_avg_csv(dir / ("mal_share_ma_" + g + ".csv"), b, rep);
    std::cout << g << ": T=" << b.size() << "\n";
  }
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  auto rows = load_events(cfg);
  fs::create_directories(cfg.output_dir);
  auto breakdown = ecosystem_breakdown(rows);
  write_breakdown_csv(fs::path(cfg.output_dir) / "breakdown.csv", breakdown);
  std::cout << "ecosystem,all_entries,malware_entries,malware_share\n";
  for (const auto& r : breakdown)
    std::cout << to_string(r.ecosystem) << ',' << r.all_entries << ',' << r.malware_entries
              << ',' << format_double(r.malware_share) << "\n";
  return cmd_build(cfg);
}

int cmd_select(const RunConfig& cfg) {
  SeriesBundle b = load_series(cfg);
  for (Target target : targets_of(cfg.target)) {
    auto [orders, trace] = select_orders(b, target, default_transform(target), cfg.p_max);
    fs::path dir = fs::path(cfg.output_dir);
    write_text(dir / ("trace_" + std::string(to_string(b.granularity)) + "_" +
                      std::string(to_string(target)) + ".jsonl"),
               trace_to_jsonl(trace));
    std::cout << to_string(target) << ": orders " << to_string(orders) << "\n";
  }
  return 0;
}

int cmd_fit(const RunConfig& cfg) {
  SeriesBundle b = load_series(cfg);
  if (cfg.orders_text.empty()) throw CLI::ValidationError("fit needs --orders p1,p2,p3,p4");
  ArdlOrders orders = parse_orders(cfg.orders_text);
  for (Target target : targets_of(cfg.target)) {
    ModelOutput m = run_model(b, target, orders);
    fs::path dir = fs::path(cfg.output_dir) / "models" /
                   (std::string(to_string(b.granularity)) + "_" +
                    std::string(to_string(target)));
    write_model_files(dir, m, nullptr, cfg.dm_horizon);
    std::cout << to_string(target) << ": R2=" << format_double(m.fit.r_squared) << "\n";
  }
  return 0;
}

int cmd_diagnose(const RunConfig& cfg) { return cmd_fit(cfg); }

int cmd_pipeline(const RunConfig& cfg) {
  auto rows = load_events(cfg);
  Date start = need_date(cfg.window_start, "window-start");
  Date end = need_date(cfg.window_end, "window-end");
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  write_events_csv((dir / "events.csv").string(), rows);
  write_breakdown_csv(dir / "breakdown.csv", ecosystem_breakdown(rows));

  std::string orders_text = "granularity,target,p1,p2,p3,p4\n";
  std::string lrm_text = "regressor,granularity,target,value,std_error,significant\n";
  nlohmann::ordered_json summary;
  std::vector<double> r2s;

  for (const auto& g : cfg.granularities) {
    auto gran = parse_granularity(g);
    if (!gran) throw CLI::ValidationError("unknown granularity " + g);
    SeriesBundle b = aggregate(rows, *gran, start, end);
    write_series_csv((dir / ("series_" + g + ".csv")).string(), b);
    write_descriptive_csv(dir / ("descriptive_" + g + ".csv"), descriptive_report(b));

    for (Target target : targets_of(cfg.target)) {
      std::string name = g + "_" + std::string(to_string(target));
      auto [orders, trace] =
          select_orders(b, target, default_transform(target), cfg.p_max);
      ModelOutput m = run_model(b, target, orders);
      write_model_files(dir / "models" / name, m, &trace, cfg.dm_horizon);

      orders_text += g + ',' + std::string(to_string(target)) + ',' +
                     std::to_string(orders.p1) + ',' + std::to_string(orders.p2) + ',' +
                     std::to_string(orders.p3) + ',' + std::to_string(orders.p4) + '\n';
      for (const auto& r : m.lrm)
        lrm_text += std::string(to_string(r.regressor)) + ',' + g + ',' +
                    std::string(to_string(target)) + ',' + format_double(r.value) + ',' +
                    format_double(r.std_error) + ',' +
                    (r.significant_95 ? "true" : "false") + '\n';

      nlohmann::ordered_json mj;
      mj["orders"] = {orders.p1, orders.p2, orders.p3, orders.p4};
      mj["r_squared"] = m.fit.r_squared;
      mj["sigma2"] = m.fit.sigma2;
      mj["dof"] = m.fit.dof;
      mj["jarque_bera_p"] = m.jb.p_value;
      mj["adf_statistic"] = m.adf_target.statistic;
      mj["adf_reject_at_95"] = m.adf_target.reject_at_95;
      if (m.exceedance >= 0) mj["share_exceedance_percent"] = m.exceedance;
      summary["models"][name] = std::move(mj);
      r2s.push_back(m.fit.r_squared);
      std::cout << name << ": orders " << to_string(orders)
                << " R2=" << format_double(m.fit.r_squared) << "\n";
    }
  }

  summary["mean_r_squared"] = mean(r2s);
  write_text(dir / "orders.csv", orders_text);
  write_text(dir / "lrm.csv", lrm_text);
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  // Seeded synthetic series bundle from a stable ARDL process; useful for
  // exercising select/fit/diagnose without a snapshot.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<long long> eco_d(0, 6);
  std::poisson_distribution<long long> adv_d(3.0), art_d(2.0);
  std::normal_distribution<double> noise(0.0, 2.0);

  long T = cfg.sim_length;
  SeriesBundle b;
  b.granularity = Granularity::Weekly;
  Date start = need_date(cfg.window_start, "window-start");
  long first = period_ordinal(start, b.granularity);
  double y_prev = 40.0;
  for (long t = 0; t < T; ++t) {
    b.periods.push_back(period_label(first + t, b.granularity));
    long long eco = eco_d(rng), adv = adv_d(rng), art = art_d(rng);
    double y = 10.0 + 0.5 * y_prev + 3.0 * static_cast<double>(eco) +
               0.8 * static_cast<double>(adv) - 0.5 * static_cast<double>(art) +
               noise(rng);
    y = std::clamp(y, 0.0, 100.0);
    b.eco.push_back(eco);
    b.adv.push_back(adv);
    b.art.push_back(art);
    b.mal_share.push_back(y);
    b.mal_freq.push_back(eco == 0 ? 0 : static_cast<long long>(y));
    y_prev = y;
  }
  fs::create_directories(cfg.output_dir);
  std::string path = (fs::path(cfg.output_dir) / "series_simulated.csv").string();
  write_series_csv(path, b);
  std::cout << "wrote " << path << " (T=" << T << ")\n";
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--snapshot", cfg.snapshot, "OSV snapshot directory or zip");
  cmd->add_option("--events", cfg.events, "events.csv produced by ingest");
  cmd->add_option("--series", cfg.series, "series CSV produced by build");
  cmd->add_option("--window-start", cfg.window_start, "window start (YYYY-MM-DD)");
  cmd->add_option("--window-end", cfg.window_end, "window end (YYYY-MM-DD)");
  cmd->add_option("--granularities", cfg.granularities,
                  "subset of daily weekly monthly")
      ->delimiter(',');
  cmd->add_option("--target", cfg.target, "freq, share or both");
  cmd->add_option("--orders", cfg.orders_text, "lag orders p1,p2,p3,p4");
  cmd->add_option("--p-max", cfg.p_max, "order-selection cap")->check(CLI::PositiveNumber);
  cmd->add_option("--output-dir", cfg.output_dir, "output directory");
  cmd->add_option("--seed", cfg.seed, "seed for simulation subcommands");
  cmd->add_option("--dm-horizon", cfg.dm_horizon, "dynamic-multiplier steps");
  cmd->add_option("--length", cfg.sim_length, "simulated series length");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OSV malware time-series and ARDL analysis pipeline"};
  app.set_config("--config", "", "key=value config file");
  app.require_subcommand(1);

  RunConfig cfg;
  int (*handlers[])(const RunConfig&) = {cmd_ingest, cmd_build,    cmd_select,
                                         cmd_fit,    cmd_diagnose, cmd_report,
                                         cmd_pipeline, cmd_simulate};
  const char* names[] = {"ingest",   "build",  "select",   "fit",
                         "diagnose", "report", "pipeline", "simulate"};
  const char* descs[] = {
      "parse an OSV snapshot into events.csv and an ecosystem breakdown",
      "aggregate events into the five series per granularity",
      "run three-step lag-order selection on a series CSV",
      "fit an ARDL model with given orders; write fit, LRM and DM files",
      "fit and write the diagnostics battery (ACF, QQ, tests)",
      "descriptive statistics and ecosystem breakdown",
      "full ingest -> build -> select -> fit -> diagnose run",
      "write a seeded synthetic series CSV"};
  int chosen = -1;
  for (int i = 0; i < 8; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    add_common(sub, cfg);
    sub->callback([&chosen, i] { chosen = i; });
  }

  try {
    app.parse(argc, argv);
    return handlers[chosen](cfg);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const SelectionFailure& e) {
    std::cerr << "order selection failed: " << e.what() << "\n";
    return kExitSelection;
  } catch (const SingularDesignError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const UnitRootError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
