#include "pirogue/calendar.hpp"

#include <array>
#include <cstdio>

#include "pirogue/errors.hpp"

namespace pirogue {

namespace {
constexpr std::array<int, 12> kMonthDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
}

int days_in_month(int month) {
  if (month < 1 || month > 12) throw InvariantError("month out of range: " + std::to_string(month));
  return kMonthDays[static_cast<std::size_t>(month - 1)];
}

void SimClock::advance_hour() {
  if (++hour < 24) return;
  hour = 0;
  ++day_index;
  if (++day_of_month <= days_in_month(month)) return;
  day_of_month = 1;
  ++month_index;
  if (++month <= 12) return;
  month = 1;
  ++year;
}

std::string SimClock::date_string() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day_of_month);
  return buf;
}

std::int64_t days_in_span(int start_month, int months) {
  std::int64_t days = 0;
  int m = start_month;
  for (int i = 0; i < months; ++i) {
    days += days_in_month(m);
    m = m == 12 ? 1 : m + 1;
  }
  return days;
}

}  // namespace pirogue
