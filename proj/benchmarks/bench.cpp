#include <benchmark/benchmark.h>

#include <random>

#include "malseries/ardl.hpp"
#include "malseries/diagnostics.hpp"
#include "malseries/series.hpp"

using namespace malseries;

namespace {

SeriesBundle synthetic_bundle(size_t n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::poisson_distribution<int> pois(3);
  SeriesBundle b;
  b.granularity = Granularity::Daily;
  double y = 0;
  for (size_t t = 0; t < n; ++t) {
    double eco = static_cast<double>(rng() % 7);
    double adv = pois(rng);
    double art = pois(rng);
    y = 5.0 + 0.6 * y + 1.2 * eco + 0.4 * adv + 0.2 * art + noise(rng);
    b.periods.push_back(period_label(static_cast<long>(t), Granularity::Daily));
    b.mal_freq.push_back(0);
    b.mal_share.push_back(y);
    b.eco.push_back(static_cast<int>(eco));
    b.adv.push_back(static_cast<long long>(adv));
    b.art.push_back(static_cast<long long>(art));
  }
  return b;
}

std::vector<EventRow> synthetic_rows(size_t n) {
  std::mt19937_64 rng(7);
  std::vector<EventRow> rows;
  Date start = make_date(2022, 1, 1);
  for (size_t i = 0; i < n; ++i) {
    rows.push_back({start + std::chrono::days{static_cast<long>(rng() % 1186)},
                    studied_ecosystems()[rng() % 6],
                    rng() % 2 ? RecordKind::Malware : RecordKind::Vulnerability,
                    static_cast<int>(rng() % 5), static_cast<int>(rng() % 5)});
  }
  return rows;
}

}  // namespace

static void BM_FitArdl(benchmark::State& state) {
  SeriesBundle b = synthetic_bundle(static_cast<size_t>(state.range(0)));
  ArdlOrders orders{8, 6, 6, 6};
  for (auto _ : state) {
    ArdlFit fit = fit_ardl(b, Target::MalShare, orders, Transform::Identity);
    benchmark::DoNotOptimize(fit.r_squared);
  }
}
BENCHMARK(BM_FitArdl)->Arg(500)->Arg(1200)->Arg(5000);

static void BM_Acf(benchmark::State& state) {
  SeriesBundle b = synthetic_bundle(static_cast<size_t>(state.range(0)));
  int L = default_acf_max_lag(b.mal_share.size());
  for (auto _ : state) {
    AcfResult a = acf(b.mal_share, L);
    benchmark::DoNotOptimize(a.values.data());
  }
}
BENCHMARK(BM_Acf)->Arg(1200)->Arg(10000);

static void BM_Aggregate(benchmark::State& state) {
  auto rows = synthetic_rows(static_cast<size_t>(state.range(0)));
  Date start = make_date(2022, 1, 1), end = make_date(2025, 3, 31);
  for (auto _ : state) {
    SeriesBundle b = aggregate(rows, Granularity::Daily, start, end);
    benchmark::DoNotOptimize(b.mal_freq.data());
  }
}
BENCHMARK(BM_Aggregate)->Arg(10000)->Arg(100000);

static void BM_DynamicMultipliers(benchmark::State& state) {
  SeriesBundle b = synthetic_bundle(2000);
  ArdlFit fit = fit_ardl(b, Target::MalShare, ArdlOrders{8, 6, 6, 6},
                         Transform::Identity);
  for (auto _ : state) {
    auto dm = dynamic_multipliers(fit, Regressor::Eco,
                                  static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(dm.data());
  }
}
BENCHMARK(BM_DynamicMultipliers)->Arg(50)->Arg(200);
