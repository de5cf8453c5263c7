#pragma once

#include <cstdint>
#include <string>

namespace voltcast {

// Calendar date (UTC). Thin wrapper over the C++20 civil-calendar facilities
// with the parsing/formatting this project needs.
struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  static CivilDate parse(const std::string& iso);  // "YYYY-MM-DD"
  std::string to_string() const;

  std::int64_t serial_day() const;  // days since 1970-01-01
  static CivilDate from_serial(std::int64_t days);
  CivilDate plus_days(std::int64_t days) const;
  int weekday_mon0() const;  // 0 = Monday ... 6 = Sunday

  friend bool operator==(const CivilDate&, const CivilDate&) = default;
};

// Seconds since the UNIX epoch for an ISO-8601 UTC timestamp. Accepts
// "YYYY-MM-DDTHH:MM[:SS]" with an optional trailing 'Z' and either 'T' or a
// space as the separator.
std::int64_t parse_timestamp_utc(const std::string& text);
std::string format_timestamp_utc(std::int64_t epoch_seconds);

}  // namespace voltcast
