#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace malseries {

/// Calendar date (UTC), day resolution.
using Date = std::chrono::sys_days;

Date make_date(int year, int month, int day);

/// Parses `YYYY-MM-DD`; also accepts an RFC 3339 timestamp, in which case
/// the date part is taken. Returns nullopt on malformed input.
std::optional<Date> parse_date(std::string_view text);

/// ISO 8601 `YYYY-MM-DD`.
std::string format_date(Date d);

struct IsoWeek {
  int year = 0;
  int week = 0;
  auto operator<=>(const IsoWeek&) const = default;
};

/// ISO 8601 week of a date (Monday start; week 1 contains the year's first Thursday).
IsoWeek iso_week_of(Date d);

enum class Granularity { Daily, Weekly, Monthly };

std::string_view to_string(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view text);

/// Maps a date to an integer period ordinal such that consecutive periods of
/// the granularity map to consecutive integers (gap-free iteration).
long period_ordinal(Date d, Granularity g);

/// Label of a period: `YYYY-MM-DD` (daily), `YYYY-Www` (weekly), `YYYY-MM` (monthly).
std::string period_label(long ordinal, Granularity g);

/// Number of periods spanned by [start, end] inclusive.
long period_count(Date start, Date end, Granularity g);

}  // namespace malseries
