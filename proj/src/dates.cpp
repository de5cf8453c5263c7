#include "dates.hpp"

#include <chrono>
#include <cstdio>

#include "errors.hpp"

namespace voltcast {

namespace chr = std::chrono;

namespace {

chr::year_month_day to_ymd(const CivilDate& d) {
  return chr::year{d.year} / d.month / d.day;
}

bool read_int(const std::string& s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    value = value * 10 + (s[i] - '0');
  }
  out = value;
  return true;
}

}  // namespace

CivilDate CivilDate::parse(const std::string& iso) {
  CivilDate d;
  if (iso.size() < 10 || iso[4] != '-' || iso[7] != '-' ||
      !read_int(iso, 0, 4, d.year) || !read_int(iso, 5, 2, d.month) ||
      !read_int(iso, 8, 2, d.day)) {
    throw ValidationError("invalid date '" + iso + "', expected YYYY-MM-DD");
  }
  if (!to_ymd(d).ok()) {
    throw ValidationError("invalid calendar date '" + iso + "'");
  }
  return d;
}

std::string CivilDate::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::int64_t CivilDate::serial_day() const {
  return chr::sys_days(to_ymd(*this)).time_since_epoch().count();
}

CivilDate CivilDate::from_serial(std::int64_t days) {
  chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  return CivilDate{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

CivilDate CivilDate::plus_days(std::int64_t days) const {
  return from_serial(serial_day() + days);
}

int CivilDate::weekday_mon0() const {
  chr::weekday wd{chr::sys_days(to_ymd(*this))};
  return static_cast<int>(wd.iso_encoding()) - 1;  // ISO: Monday=1
}

std::int64_t parse_timestamp_utc(const std::string& text) {
  // date part
  if (text.size() < 16 || (text[10] != 'T' && text[10] != ' ')) {
    throw ValidationError("invalid timestamp '" + text + "'");
  }
  CivilDate date = CivilDate::parse(text.substr(0, 10));
  int hh = 0, mm = 0, ss = 0;
  if (!read_int(text, 11, 2, hh) || text[13] != ':' || !read_int(text, 14, 2, mm)) {
    throw ValidationError("invalid timestamp '" + text + "'");
  }
  std::size_t rest = 16;
  if (rest < text.size() && text[rest] == ':') {
    if (!read_int(text, rest + 1, 2, ss)) {
      throw ValidationError("invalid timestamp '" + text + "'");
    }
    rest += 3;
  }
  if (rest < text.size() && text[rest] != 'Z') {
    throw ValidationError("invalid timestamp '" + text + "' (only UTC 'Z' supported)");
  }
  if (hh > 23 || mm > 59 || ss > 59) {
    throw ValidationError("invalid time of day in '" + text + "'");
  }
  return date.serial_day() * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_timestamp_utc(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t sod = epoch_seconds - days * 86400;
  if (sod < 0) {  // negative epochs
    days -= 1;
    sod += 86400;
  }
  CivilDate date = CivilDate::from_serial(days);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%sT%02d:%02d:%02dZ", date.to_string().c_str(),
                int(sod / 3600), int((sod / 60) % 60), int(sod % 60));
  return buf;
}

}  // namespace voltcast
