// Acceptance gate: one PASS/FAIL/SKIP line per criterion, nonzero exit on
// any FAIL. argv[1] = path to the CLI binary, argv[2] = fixture snapshot
// directory (criteria 1 and 10 are skipped without it). Criteria 2 and 11
// need a full OSV snapshot from April 2025 or later; point
// MALSERIES_LIVE_SNAPSHOT at one to enable them.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "malseries/ardl.hpp"
#include "malseries/csv.hpp"
#include "malseries/dates.hpp"
#include "malseries/diagnostics.hpp"
#include "malseries/osv.hpp"
#include "malseries/selection.hpp"
#include "malseries/series.hpp"
#include "malseries/stats.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace malseries;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

void skip(int criterion, const std::string& why) {
  std::cout << "criterion " << criterion << ": SKIP (" << why << ")\n";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "malseries_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ---- criterion 1: ingestion fixture exactness ---------------------------

void criterion_ingest(const std::string& cli, const std::string& fixture,
                      const fs::path& scratch) {
  fs::path out = scratch / "ingest";
  auto t0 = Clock::now();
  int rc = run("\"" + cli + "\" ingest --snapshot \"" + fixture +
               "\" --output-dir \"" + out.string() + "\" > /dev/null");
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (rc != 0) {
    report(1, false, "ingest exited with " + std::to_string(rc));
    return;
  }
  const std::string expected =
      "ecosystem,all_entries,malware_entries,malware_share\n"
      "CRAN,4,0,0\n"
      "Go,7,2,28.571428571428573\n"
      "Maven,6,1,16.666666666666668\n"
      "npm,21,16,76.19047619047619\n"
      "PyPI,13,9,69.23076923076923\n"
      "RubyGems,8,5,62.5\n";
  std::string got = read_file(out / "breakdown.csv");
  bool ok = got == expected && secs < 1.0;
  report(1, ok,
         ok ? "breakdown exact, " + std::to_string(secs) + "s"
            : (got == expected ? "too slow: " + std::to_string(secs) + "s"
                               : "breakdown mismatch"));
}

// ---- criterion 2: live Table-1 lower bounds -----------------------------

void criterion_live_bounds(const char* live) {
  if (!live) {
    skip(2, "no live snapshot; set MALSERIES_LIVE_SNAPSHOT");
    return;
  }
  auto rows = scan_snapshot(live);
  std::map<EcosystemName, long long> malware;
  for (const auto& r : rows)
    if (r.kind == RecordKind::Malware) ++malware[r.ecosystem];
  auto floor_of = [](long long published) {
    return static_cast<long long>(static_cast<double>(published) * 0.98);
  };
  bool ok = malware[EcosystemName::Npm] >= floor_of(20481) &&
            malware[EcosystemName::PyPI] >= floor_of(8966) &&
            malware[EcosystemName::RubyGems] >= floor_of(813);
  report(2, ok,
         "npm=" + std::to_string(malware[EcosystemName::Npm]) +
             " PyPI=" + std::to_string(malware[EcosystemName::PyPI]) +
             " RubyGems=" + std::to_string(malware[EcosystemName::RubyGems]));
}

// ---- criterion 3: series lengths for the study window -------------------

void criterion_series_lengths() {
  Date start = make_date(2022, 1, 1), end = make_date(2025, 3, 31);
  long daily = period_count(start, end, Granularity::Daily);
  long weekly = period_count(start, end, Granularity::Weekly);
  long monthly = period_count(start, end, Granularity::Monthly);
  bool ok = daily == 1195 && monthly == 39 &&
            (weekly == 167 || weekly == 168 || weekly == 169);
  report(3, ok,
         "daily=" + std::to_string(daily) + " weekly=" + std::to_string(weekly) +
             " monthly=" + std::to_string(monthly) +
             "; expected daily=1195 weekly in {167,168,169} monthly=39");
}

// ---- criterion 4: OLS recovery ------------------------------------------

void criterion_ols_recovery() {
  test_util::ArdlProcess p;
  p.alpha = 1.0;
  p.beta = {0.5};
  p.gamma = {1.0};
  p.phi = {-0.3};
  p.rho = {0.2};
  p.noise_sigma = 0.1;
  auto t0 = Clock::now();
  SeriesBundle b = test_util::simulate_ardl(p, 5000, 12345);
  ArdlFit fit = fit_ardl(b, Target::MalShare, ArdlOrders{1, 0, 0, 0},
                         Transform::Identity);
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool ok = std::abs(fit.beta[0] - 0.5) < 0.05 && std::abs(fit.gamma[0] - 1.0) < 0.05 &&
            std::abs(fit.phi[0] + 0.3) < 0.05 && std::abs(fit.rho[0] - 0.2) < 0.05 &&
            fit.r_squared > 0.9 && secs < 1.0;
  report(4, ok,
         "beta1=" + format_double(fit.beta[0]) + " R2=" + format_double(fit.r_squared) +
             " " + std::to_string(secs) + "s");
}

// ---- criterion 5: multiplier identity -----------------------------------

ArdlFit random_stationary_fit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> order(0, 4);
  ArdlFit fit;
  fit.orders = ArdlOrders{std::max(1, order(rng)), order(rng), order(rng), order(rng)};
  // Positive beta summing to a draw from [0, 0.9], rejected until the
  // dominant companion root is below 0.9 so the 200-step tail vanishes.
  int p1 = fit.orders.p1;
  fit.beta.assign(static_cast<size_t>(p1), 0.0);
  double radius;
  do {
    double rem = 0.9 * u(rng);
    for (int j = 0; j < p1; ++j) {
      fit.beta[static_cast<size_t>(j)] = (j == p1 - 1) ? rem : u(rng) * rem;
      rem -= fit.beta[static_cast<size_t>(j)];
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p1, p1);
    for (int j = 0; j < p1; ++j) comp(0, j) = fit.beta[static_cast<size_t>(j)];
    for (int i = 1; i < p1; ++i) comp(i, i - 1) = 1.0;
    radius = comp.eigenvalues().cwiseAbs().maxCoeff();
  } while (radius > 0.9);
  auto fill = [&](std::vector<double>& c, int p) {
    for (int j = 0; j <= p; ++j) c.push_back(4.0 * u(rng) - 2.0);
  };
  fill(fit.gamma, fit.orders.p2);
  fill(fit.phi, fit.orders.p3);
  fill(fit.rho, fit.orders.p4);
  int n = fit.orders.parameter_count();
  fit.coef_covariance = Eigen::MatrixXd::Zero(n, n);
  fit.dof = 100;
  return fit;
}

void criterion_multiplier_identity() {
  std::mt19937_64 rng(777);
  bool ok = true;
  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    ArdlFit fit = random_stationary_fit(rng);
    for (Regressor r : {Regressor::Eco, Regressor::Adv, Regressor::Art}) {
      double lrm = long_run_multiplier(fit, r).value;
      auto dm = dynamic_multipliers(fit, r, 200);
      double sum = 0;
      for (double v : dm) sum += v;
      double err = std::abs(sum - lrm) / std::max(1.0, std::abs(lrm));
      worst = std::max(worst, err);
      if (err >= 1e-6) ok = false;
    }
  }
  report(5, ok, "worst relative error " + format_double(worst));
}

// ---- criterion 6: LRM hand cases ----------------------------------------

void criterion_lrm_hand_cases() {
  ArdlFit fit;
  fit.orders = ArdlOrders{1, 1, 0, 0};
  fit.beta = {0.5};
  fit.gamma = {1.0, 0.5};
  fit.phi = {0.0};
  fit.rho = {0.0};
  fit.coef_covariance = Eigen::MatrixXd::Zero(fit.orders.parameter_count(),
                                              fit.orders.parameter_count());
  fit.dof = 50;
  double a = long_run_multiplier(fit, Regressor::Eco).value;

  ArdlFit nofb;
  nofb.orders = ArdlOrders{0, 2, 0, 0};
  nofb.gamma = {2.0, -0.5, 1.0};
  nofb.phi = {0.0};
  nofb.rho = {0.0};
  nofb.coef_covariance = Eigen::MatrixXd::Zero(nofb.orders.parameter_count(),
                                               nofb.orders.parameter_count());
  nofb.dof = 50;
  double b = long_run_multiplier(nofb, Regressor::Eco).value;

  bool ok = a == 3.0 && b == 2.5;
  report(6, ok, "got " + format_double(a) + " and " + format_double(b));
}

// ---- criterion 7: order-selection sanity --------------------------------

void criterion_selection_sanity() {
  test_util::ArdlProcess p;
  p.alpha = 2.0;
  p.beta = {0.55, 0.3};
  p.gamma = {1.0, 0.8};
  p.phi = {0.5, -0.4};
  p.rho = {0.3, 0.3};
  p.noise_sigma = 1.0;
  SeriesBundle b = test_util::simulate_ardl(p, 2000, 100);
  auto [orders, trace] = select_orders(b, Target::MalShare, Transform::Identity, 10);

  ArdlFit fit = fit_ardl(b, Target::MalShare, orders, Transform::Identity);
  AcfResult a = acf(fit.residuals, default_acf_max_lag(fit.residuals.size()));
  bool in_band = true;
  for (double v : a.values) in_band &= std::abs(v) <= a.band;

  ArdlOrders step1;
  for (const auto& c : trace.candidates)
    if (c.step == 1) step1 = c.orders;
  bool monotone = true;
  for (const auto& c : trace.candidates)
    if (c.step > 1)
      monotone &= c.orders.p1 <= step1.p1 && c.orders.p2 <= step1.p2 &&
                  c.orders.p3 <= step1.p3 && c.orders.p4 <= step1.p4;

  bool ok = orders.p1 >= 2 && in_band && monotone;
  report(7, ok,
         "selected " + to_string(orders) + (in_band ? "" : ", residual ACF out of band") +
             (monotone ? "" : ", trace not monotone"));
}

// ---- criterion 8: diagnostics oracles -----------------------------------

void criterion_diagnostics_oracles() {
  bool ok = true;
  std::string detail;

  // ACF against a double-loop oracle.
  auto x = test_util::gaussian_series(400, 42);
  int L = default_acf_max_lag(x.size());
  AcfResult a = acf(x, L);
  double m = mean(x);
  double denom = 0;
  for (double v : x) denom += (v - m) * (v - m);
  for (int l = 1; l <= L; ++l) {
    double num = 0;
    for (size_t t = 0; t + static_cast<size_t>(l) < x.size(); ++t)
      num += (x[t] - m) * (x[t + static_cast<size_t>(l)] - m);
    if (std::abs(a.values[static_cast<size_t>(l - 1)] - num / denom) >= 1e-12) {
      ok = false;
      detail = "acf mismatch at lag " + std::to_string(l);
    }
  }

  // JB = 0 for a zero-skew, kurtosis-3 vector; JB > 100 for uniform noise.
  std::vector<double> flat = {-1, -1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0};
  if (std::abs(jarque_bera(flat).statistic) >= 1e-10) {
    ok = false;
    detail = "JB not zero on the flat vector";
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> uni(2000);
  for (auto& v : uni) v = u(rng);
  if (jarque_bera(uni).statistic <= 100.0) {
    ok = false;
    detail = "JB too small on uniform noise";
  }

  // ADF: reject white noise, keep a random walk.
  auto noise = test_util::gaussian_series(500, 1234);
  if (!adf_test(noise).reject_at_95) {
    ok = false;
    detail = "ADF kept white noise";
  }
  auto steps = test_util::gaussian_series(500, 5678);
  std::vector<double> walk(steps.size());
  double acc = 0;
  for (size_t i = 0; i < steps.size(); ++i) walk[i] = acc += steps[i];
  if (adf_test(walk).reject_at_95) {
    ok = false;
    detail = "ADF rejected a random walk";
  }

  report(8, ok, detail);
}

// ---- criterion 9: MalShare bounds ---------------------------------------

void criterion_share_bounds() {
  bool ok = true;
  std::mt19937_64 rng(9);
  Date start = make_date(2023, 1, 1), end = make_date(2023, 6, 30);
  std::uniform_int_distribution<int> day(0, 180);
  std::uniform_int_distribution<size_t> eco(0, 5);
  std::uniform_int_distribution<int> kind(0, 1);
  for (int rep = 0; rep < 20 && ok; ++rep) {
    std::vector<EventRow> rows;
    size_t n = 1 + rng() % 200;
    for (size_t i = 0; i < n; ++i)
      rows.push_back({start + std::chrono::days{day(rng)}, studied_ecosystems()[eco(rng)],
                      kind(rng) ? RecordKind::Malware : RecordKind::Vulnerability, 0, 0});
    for (Granularity g : {Granularity::Daily, Granularity::Weekly, Granularity::Monthly}) {
      SeriesBundle b = aggregate(rows, g, start, end);
      std::map<long, int> totals;  // rows per period, for the zero-total rule
      for (const auto& r : rows) ++totals[period_ordinal(r.date, g)];
      long first = period_ordinal(start, g);
      for (size_t t = 0; t < b.size(); ++t) {
        ok &= b.mal_share[t] >= 0.0 && b.mal_share[t] <= 100.0;
        ok &= b.eco[t] >= 0 && b.eco[t] <= 6;
        if (totals[first + static_cast<long>(t)] == 0) ok &= b.mal_share[t] == 0.0;
      }
    }
  }
  report(9, ok, "");
}

// ---- criterion 10: determinism ------------------------------------------

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out[fs::relative(e.path(), root).string()] = read_file(e.path());
  return out;
}

void criterion_determinism(const std::string& cli, const std::string& fixture,
                           const fs::path& scratch) {
  // The fixture spans January-June 2024; weekly aggregation over that window
  // leaves enough periods for selection to converge.
  std::string common = "\" pipeline --snapshot \"" + fixture +
                       "\" --window-start 2024-01-01 --window-end 2024-06-30"
                       " --granularities weekly --output-dir \"";
  fs::path a = scratch / "run_a", b = scratch / "run_b";
  int rc1 = run("\"" + cli + common + a.string() + "\" > /dev/null");
  int rc2 = run("\"" + cli + common + b.string() + "\" > /dev/null");
  if (rc1 != 0 || rc2 != 0) {
    report(10, false, "pipeline exited with " + std::to_string(rc1) + "/" +
                          std::to_string(rc2));
    return;
  }
  auto ta = tree_contents(a), tb = tree_contents(b);
  bool ok = ta == tb && !ta.empty();
  std::string detail = std::to_string(ta.size()) + " files";
  if (!ok) {
    for (const auto& [name, text] : ta)
      if (!tb.count(name) || tb.at(name) != text) {
        detail = "first difference: " + name;
        break;
      }
  }
  report(10, ok, detail);
}

// ---- criterion 11: documentation reproduction ---------------------------

void criterion_documentation(const char* live, const std::string& cli,
                             const fs::path& scratch) {
  if (!live) {
    skip(11, "snapshot-dependent, non-gating; set MALSERIES_LIVE_SNAPSHOT");
    return;
  }
  fs::path out = scratch / "live";
  int rc = run("\"" + cli + "\" pipeline --snapshot \"" + std::string(live) +
               "\" --output-dir \"" + out.string() + "\"");
  // Non-gating: the numbers land in out/ for manual comparison in the docs.
  std::cout << "criterion 11: " << (rc == 0 ? "PASS" : "FAIL")
            << " (non-gating report written to " << out.string() << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <cli-binary> [fixture-snapshot-dir]\n";
    return 2;
  }
  std::string cli = argv[1];
  std::string fixture = argc > 2 ? argv[2] : "";
  const char* live = std::getenv("MALSERIES_LIVE_SNAPSHOT");
  fs::path scratch = scratch_dir();

  if (fixture.empty())
    skip(1, "no fixture snapshot given");
  else
    criterion_ingest(cli, fixture, scratch);
  criterion_live_bounds(live);
  criterion_series_lengths();
  criterion_ols_recovery();
  criterion_multiplier_identity();
  criterion_lrm_hand_cases();
  criterion_selection_sanity();
  criterion_diagnostics_oracles();
  criterion_share_bounds();
  if (fixture.empty())
    skip(10, "no fixture snapshot given");
  else
    criterion_determinism(cli, fixture, scratch);
  criterion_documentation(live, cli, scratch);

  std::cout << (failures == 0 ? "all criteria passed\n"
                              : std::to_string(failures) + " criteria failed\n");
  return failures == 0 ? 0 : 1;
}
