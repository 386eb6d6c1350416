#pragma once

#include <span>
#include <string>
#include <vector>

#include "malseries/dates.hpp"
#include "malseries/osv.hpp"

namespace malseries {

/// The five studied series over one gap-free period index.
struct SeriesBundle {
  Granularity granularity = Granularity::Daily;
  std::vector<std::string> periods;
  std::vector<long long> mal_freq;
  std::vector<double> mal_share;  // percent, 0..100
  std::vector<long long> eco;     // distinct contributing ecosystems, 0..6
  std::vector<long long> adv;
  std::vector<long long> art;

  size_t size() const { return periods.size(); }
};

/// Aggregates event rows into the five series. Periods run gap-free from the
/// period containing window_start through the period containing window_end;
/// rows outside the window are ignored. A period with zero rows of any kind
/// gets zeros throughout, including mal_share.
SeriesBundle aggregate(std::span<const EventRow> rows, Granularity granularity,
                       Date window_start, Date window_end);

struct SeriesSummary {
  double median = 0, mean = 0, min = 0, max = 0;
};

struct DescriptiveReport {
  SeriesSummary mal_freq, mal_share, eco, adv, art;
  int ma_window = 9;
  std::vector<double> mal_share_moving_avg;  // centered, truncated at edges
};

DescriptiveReport descriptive_report(const SeriesBundle& bundle, int ma_window = 9);

struct EcosystemBreakdownRow {
  EcosystemName ecosystem;
  long long all_entries = 0;
  long long malware_entries = 0;
  double malware_share = 0;  // percent, 0 when all_entries = 0
};

/// Whole-window per-ecosystem totals, one row per studied ecosystem in
/// canonical order.
std::vector<EcosystemBreakdownRow> ecosystem_breakdown(std::span<const EventRow> rows);

void write_series_csv(const std::string& path, const SeriesBundle& bundle);
SeriesBundle read_series_csv(const std::string& path);

}  // namespace malseries
