#pragma once

#include <cstdint>
#include <string>

namespace pirogue {

/// Days in `month` (1-12) of a non-leap year.
int days_in_month(int month);

/**
 * Simulation clock with a one-hour step on a 365-day calendar.
 *
 * `month_index` counts months elapsed since the run start and drives the
 * reproduction cadence and campaign expiry; `day_index` counts days since start.
 */
struct SimClock {
  int year = 1979;
  int month = 1;  // 1-12
  int day_of_month = 1;
  int hour = 0;  // 0-23
  std::int64_t day_index = 0;
  std::int64_t month_index = 0;

  void advance_hour();
  bool at_day_start() const { return hour == 0; }
  bool at_month_start() const { return hour == 0 && day_of_month == 1; }

  /// ISO-8601 date, e.g. "1979-01-31".
  std::string date_string() const;

  friend bool operator==(const SimClock&, const SimClock&) = default;
};

/// Number of days covered by `months` calendar months starting at `start_month`.
std::int64_t days_in_span(int start_month, int months);

}  // namespace pirogue
