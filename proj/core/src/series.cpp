#include "malseries/series.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "malseries/csv.hpp"
#include "malseries/stats.hpp"

namespace malseries {

SeriesBundle aggregate(std::span<const EventRow> rows, Granularity granularity,
                       Date window_start, Date window_end) {
  if (window_start > window_end)
    throw std::invalid_argument("aggregate: window start after end");

  long first = period_ordinal(window_start, granularity);
  long last = period_ordinal(window_end, granularity);
  size_t count = static_cast<size_t>(last - first + 1);

  SeriesBundle b;
  b.granularity = granularity;
  b.periods.reserve(count);
  for (long o = first; o <= last; ++o) b.periods.push_back(period_label(o, granularity));
  b.mal_freq.assign(count, 0);
  b.mal_share.assign(count, 0.0);
  b.eco.assign(count, 0);
  b.adv.assign(count, 0);
  b.art.assign(count, 0);

  std::vector<long long> all_rows(count, 0);
  std::vector<std::set<EcosystemName>> eco_sets(count);

  for (const auto& r : rows) {
    if (r.date < window_start || r.date > window_end) continue;
    size_t t = static_cast<size_t>(period_ordinal(r.date, granularity) - first);
    ++all_rows[t];
    if (r.kind == RecordKind::Malware) {
      ++b.mal_freq[t];
      eco_sets[t].insert(r.ecosystem);
      b.adv[t] += r.advisory_count;
      b.art[t] += r.article_count;
    }
  }

  for (size_t t = 0; t < count; ++t) {
    b.eco[t] = static_cast<long long>(eco_sets[t].size());
    // Zero-total rule: share is 0 when the period has no rows at all.
    b.mal_share[t] = all_rows[t] == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(b.mal_freq[t]) /
                               static_cast<double>(all_rows[t]);
  }
  return b;
}

namespace {

SeriesSummary summarize(std::span<const double> x) {
  SeriesSummary s;
  s.median = median(x);
  s.mean = mean(x);
  auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  s.min = *mn;
  s.max = *mx;
  return s;
}

std::vector<double> to_double(std::span<const long long> x) {
  return {x.begin(), x.end()};
}

}  // namespace

DescriptiveReport descriptive_report(const SeriesBundle& bundle, int ma_window) {
  if (bundle.size() == 0) throw std::invalid_argument("empty series bundle");
  if (ma_window < 1) throw std::invalid_argument("moving-average window must be >= 1");

  DescriptiveReport rep;
  rep.ma_window = ma_window;
  rep.mal_freq = summarize(to_double(bundle.mal_freq));
  rep.mal_share = summarize(bundle.mal_share);
  rep.eco = summarize(to_double(bundle.eco));
  rep.adv = summarize(to_double(bundle.adv));
  rep.art = summarize(to_double(bundle.art));

  // Centered moving average, truncated at the edges.
  long n = static_cast<long>(bundle.size());
  long half = ma_window / 2;
  rep.mal_share_moving_avg.resize(bundle.size());
  for (long t = 0; t < n; ++t) {
    long lo = std::max(0L, t - half), hi = std::min(n - 1, t + half);
    double s = 0;
    for (long i = lo; i <= hi; ++i) s += bundle.mal_share[static_cast<size_t>(i)];
    rep.mal_share_moving_avg[static_cast<size_t>(t)] =
        s / static_cast<double>(hi - lo + 1);
  }
  return rep;
}

std::vector<EcosystemBreakdownRow> ecosystem_breakdown(std::span<const EventRow> rows) {
  std::map<EcosystemName, EcosystemBreakdownRow> acc;
  for (EcosystemName e : studied_ecosystems()) acc[e] = {e, 0, 0, 0.0};
  for (const auto& r : rows) {
    if (!is_studied(r.ecosystem)) continue;
    auto& row = acc[r.ecosystem];
    ++row.all_entries;
    if (r.kind == RecordKind::Malware) ++row.malware_entries;
  }
  std::vector<EcosystemBreakdownRow> out;
  for (EcosystemName e : studied_ecosystems()) {
    auto row = acc[e];
    row.malware_share = row.all_entries == 0
                            ? 0.0
                            : 100.0 * static_cast<double>(row.malware_entries) /
                                  static_cast<double>(row.all_entries);
    out.push_back(row);
  }
  return out;
}

void write_series_csv(const std::string& path, const SeriesBundle& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "period,mal_freq,mal_share,eco,adv,art\n";
  for (size_t t = 0; t < b.size(); ++t)
    out << b.periods[t] << ',' << b.mal_freq[t] << ',' << format_double(b.mal_share[t])
        << ',' << b.eco[t] << ',' << b.adv[t] << ',' << b.art[t] << '\n';
}

SeriesBundle read_series_csv(const std::string& path) {
  auto rows = read_csv(path);
  if (rows.empty() || rows[0].size() != 6 || rows[0][0] != "period")
    throw std::runtime_error("not a series CSV: " + path);
  SeriesBundle b;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 6) throw std::runtime_error("bad series row in " + path);
    b.periods.push_back(f[0]);
    b.mal_freq.push_back(std::stoll(f[1]));
    b.mal_share.push_back(std::stod(f[2]));
    b.eco.push_back(std::stoll(f[3]));
    b.adv.push_back(std::stoll(f[4]));
    b.art.push_back(std::stoll(f[5]));
  }
  if (b.periods.empty()) throw std::runtime_error("empty series CSV: " + path);
  const std::string& p0 = b.periods.front();
  b.granularity = p0.size() == 10 ? Granularity::Daily
                  : p0.find('W') != std::string::npos ? Granularity::Weekly
                                                      : Granularity::Monthly;
  return b;
}

}  // namespace malseries
