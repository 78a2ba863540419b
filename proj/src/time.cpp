#include "helios/time.hpp"

#include <charconv>
#include <cstdio>

#include "helios/error.hpp"

namespace helios {
namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  const char* b = s.data() + pos;
  for (std::size_t k = 0; k < len; ++k)
    if (b[k] < '0' || b[k] > '9') return false;
  std::from_chars(b, b + len, out);
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw InputError("invalid ISO-8601 instant '" + std::string(text) + "'");
}

}  // namespace

Instant parse_instant(std::string_view text) {
  using namespace std::chrono;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!read_int(text, 0, 4, y) || text.size() < 10 || text[4] != '-' || !read_int(text, 5, 2, mo) || text[7] != '-' ||
      !read_int(text, 8, 2, d))
    bad(text);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad(text);

  std::size_t pos = 10;
  int offset_s = 0;
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') bad(text);
    if (!read_int(text, pos + 1, 2, h) || pos + 3 >= text.size() || text[pos + 3] != ':' ||
        !read_int(text, pos + 4, 2, mi))
      bad(text);
    pos += 6;
    if (pos < text.size() && text[pos] == ':') {
      if (!read_int(text, pos + 1, 2, sec)) bad(text);
      pos += 3;
      // Fractional seconds are truncated.
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      }
    }
    if (h > 23 || mi > 59 || sec > 60) bad(text);
    if (pos < text.size()) {
      if (text[pos] == 'Z' && pos + 1 == text.size()) {
        pos = text.size();
      } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '-' ? -1 : 1;
        int oh = 0, om = 0;
        if (!read_int(text, pos + 1, 2, oh)) bad(text);
        std::size_t end = pos + 3;
        if (end < text.size()) {
          if (text[end] == ':') ++end;
          if (!read_int(text, end, 2, om)) bad(text);
          end += 2;
        }
        if (end != text.size()) bad(text);
        offset_s = sign * (oh * 3600 + om * 60);
        pos = text.size();
      } else {
        bad(text);
      }
    }
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} - seconds{offset_s};
}

std::string format_instant(Instant t) {
  using namespace std::chrono;
  const auto day_start = floor<days>(t);
  const year_month_day ymd{day_start};
  const hh_mm_ss hms{t - day_start};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string format_date(Instant t) { return format_instant(t).substr(0, 10); }

Duration parse_duration(std::string_view text) {
  if (text.empty()) throw InputError("empty duration");
  long long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{}) throw InputError("invalid duration '" + std::string(text) + "'");
  const std::string_view unit(res.ptr, static_cast<std::size_t>(text.data() + text.size() - res.ptr));
  long long factor = 0;
  if (unit.empty() || unit == "s")
    factor = 1;
  else if (unit == "m" || unit == "min")
    factor = 60;
  else if (unit == "h")
    factor = 3600;
  else if (unit == "d")
    factor = 86400;
  else
    throw InputError("invalid duration unit in '" + std::string(text) + "' (use s, m, h or d)");
  if (value <= 0) throw InputError("duration must be positive: '" + std::string(text) + "'");
  return Duration{value * factor};
}

double julian_day(Instant t) { return 2440587.5 + static_cast<double>(t.time_since_epoch().count()) / 86400.0; }

double decimal_year(Instant t) { return 2000.0 + (julian_day(t) - 2451544.5) / 365.2425; }

}  // namespace helios
