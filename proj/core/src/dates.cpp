#include "malseries/dates.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace malseries {

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

// Days since epoch of the Monday starting the ISO week containing d.
long iso_monday_ordinal(long days_since_epoch) {
  // 1969-12-29 was a Monday, i.e. ordinal -3.
  long shifted = days_since_epoch + 3;
  return (shifted >= 0 ? shifted / 7 : (shifted - 6) / 7);
}

bool parse_int(std::string_view s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

Date make_date(int y, int m, int d) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  return sys_days{ymd};
}

std::optional<Date> parse_date(std::string_view text) {
  // YYYY-MM-DD, optionally followed by a time suffix starting with 'T' or ' '.
  if (text.size() < 10) return std::nullopt;
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  if (text[4] != '-' || text[7] != '-') return std::nullopt;
  int y, m, d;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d))
    return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

std::string format_date(Date d) {
  year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

IsoWeek iso_week_of(Date d) {
  long ord = d.time_since_epoch().count();
  // Thursday of d's ISO week decides the ISO year.
  sys_days thursday{std::chrono::days{iso_monday_ordinal(ord) * 7}};
  year_month_day ymd{thursday};
  int iso_year = static_cast<int>(ymd.year());
  sys_days jan1{year_month_day{year{iso_year}, month{1}, day{1}}};
  int doy = static_cast<int>((thursday - jan1).count()) + 1;
  return IsoWeek{iso_year, (doy - 1) / 7 + 1};
}

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::Daily: return "daily";
    case Granularity::Weekly: return "weekly";
    case Granularity::Monthly: return "monthly";
  }
  return "?";
}

std::optional<Granularity> parse_granularity(std::string_view text) {
  if (text == "daily") return Granularity::Daily;
  if (text == "weekly") return Granularity::Weekly;
  if (text == "monthly") return Granularity::Monthly;
  return std::nullopt;
}

long period_ordinal(Date d, Granularity g) {
  long ord = d.time_since_epoch().count();
  switch (g) {
    case Granularity::Daily: return ord;
    case Granularity::Weekly: return iso_monday_ordinal(ord);
    case Granularity::Monthly: {
      year_month_day ymd{d};
      return static_cast<long>(static_cast<int>(ymd.year())) * 12 +
             static_cast<long>(static_cast<unsigned>(ymd.month())) - 1;
    }
  }
  throw std::logic_error("unreachable");
}

std::string period_label(long ordinal, Granularity g) {
  switch (g) {
    case Granularity::Daily:
      return format_date(sys_days{std::chrono::days{ordinal}});
    case Granularity::Weekly: {
      sys_days monday{std::chrono::days{ordinal * 7 - 3}};
      IsoWeek w = iso_week_of(monday);
      char buf[16];
      std::snprintf(buf, sizeof buf, "%04d-W%02d", w.year, w.week);
      return buf;
    }
    case Granularity::Monthly: {
      long y = ordinal >= 0 ? ordinal / 12 : (ordinal - 11) / 12;
      long m = ordinal - y * 12 + 1;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%04ld-%02ld", y, m);
      return buf;
    }
  }
  throw std::logic_error("unreachable");
}

long period_count(Date start, Date end, Granularity g) {
  if (start > end) throw std::invalid_argument("window start after end");
  return period_ordinal(end, g) - period_ordinal(start, g) + 1;
}

}  // namespace malseries
