#include "helios/weather.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "helios/error.hpp"

namespace helios {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view s, std::size_t line, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw InputError("bad " + std::string(what) + " '" + std::string(s) + "' at line " + std::to_string(line));
  return v;
}

bool has_zone(std::string_view ts) {
  if (ts.empty()) return false;
  if (ts.back() == 'Z' || ts.back() == 'z') return true;
  const std::size_t t = ts.find_first_of("T ");
  if (t == std::string_view::npos) return false;
  return ts.find_first_of("+-", t) != std::string_view::npos;
}

Instant parse_local(std::string_view ts, std::optional<double> offset_h, std::size_t line) {
  Instant t;
  try {
    t = parse_instant(ts);
  } catch (const InputError& e) {
    throw InputError(std::string(e.what()) + " at line " + std::to_string(line));
  }
  if (offset_h && !has_zone(ts)) t -= Duration{static_cast<long long>(std::llround(*offset_h * 3600.0))};
  return t;
}

// Seconds since 2000-01-01 for the same month, day and time of day.
long long tmy_key(Instant t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const auto ref = sys_days{year{2000} / ymd.month() / ymd.day()};
  return duration_cast<seconds>(ref - sys_days{year{2000} / January / 1}).count() + (t - day).count();
}

constexpr long long kRefYearSeconds = 366LL * 86400;

IrradianceRecord lerp(const IrradianceRecord& a, const IrradianceRecord& b, double w) {
  IrradianceRecord r;
  r.ghi_wm2 = a.ghi_wm2 + w * (b.ghi_wm2 - a.ghi_wm2);
  r.dni_wm2 = a.dni_wm2 + w * (b.dni_wm2 - a.dni_wm2);
  r.dhi_wm2 = a.dhi_wm2 + w * (b.dhi_wm2 - a.dhi_wm2);
  r.temp_air_c = a.temp_air_c + w * (b.temp_air_c - a.temp_air_c);
  return r;
}

}  // namespace

WeatherMode parse_weather_mode(std::string_view s) {
  if (s == "clear_sky" || s == "clear-sky") return WeatherMode::ClearSky;
  if (s == "tmy") return WeatherMode::Tmy;
  if (s == "measured") return WeatherMode::Measured;
  throw InputError("unknown weather mode '" + std::string(s) + "'", "weather_mode");
}

std::string to_string(WeatherMode m) {
  switch (m) {
    case WeatherMode::ClearSky: return "clear_sky";
    case WeatherMode::Tmy: return "tmy";
    case WeatherMode::Measured: return "measured";
  }
  return "clear_sky";
}

std::vector<IrradianceRecord> load_weather(std::string_view csv) {
  static constexpr std::string_view kColumns[] = {"timestamp_utc", "ghi_wm2", "dni_wm2", "dhi_wm2", "temp_air_c"};
  std::vector<IrradianceRecord> out;
  std::optional<double> header_offset;
  std::vector<int> col(5, -1);
  int offset_col = -1;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= csv.size()) {
    const std::size_t nl = csv.find('\n', pos);
    std::string_view line = trim(csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? csv.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = trim(line.substr(1));
      constexpr std::string_view key = "utc_offset_h=";
      if (body.starts_with(key)) header_offset = parse_number(trim(body.substr(key.size())), line_no, "utc offset");
      continue;
    }
    const auto fields = split(line);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        for (std::size_t k = 0; k < 5; ++k)
          if (fields[i] == kColumns[k]) col[k] = static_cast<int>(i);
        if (fields[i] == "utc_offset_h") offset_col = static_cast<int>(i);
      }
      for (std::size_t k = 0; k < 5; ++k)
        if (col[k] < 0) throw InputError("weather header lacks column '" + std::string(kColumns[k]) + "'");
      have_header = true;
      continue;
    }
    const int needed = std::max(*std::max_element(col.begin(), col.end()), offset_col);
    if (static_cast<int>(fields.size()) <= needed)
      throw InputError("too few fields at line " + std::to_string(line_no));

    std::optional<double> offset = header_offset;
    if (offset_col >= 0 && !fields[offset_col].empty())
      offset = parse_number(fields[offset_col], line_no, "utc_offset_h");

    IrradianceRecord r;
    r.instant = parse_local(fields[col[0]], offset, line_no);
    r.ghi_wm2 = parse_number(fields[col[1]], line_no, "ghi_wm2");
    r.dni_wm2 = parse_number(fields[col[2]], line_no, "dni_wm2");
    r.dhi_wm2 = parse_number(fields[col[3]], line_no, "dhi_wm2");
    r.temp_air_c = parse_number(fields[col[4]], line_no, "temp_air_c");
    if (r.ghi_wm2 < 0 || r.dni_wm2 < 0 || r.dhi_wm2 < 0)
      throw InputError("negative irradiance at line " + std::to_string(line_no));
    if (!out.empty() && r.instant <= out.back().instant)
      throw InputError("non-monotonic at line " + std::to_string(line_no));
    out.push_back(r);
  }
  if (!have_header) throw InputError("weather file has no header");
  return out;
}

WeatherSource WeatherSource::clear_sky() { return WeatherSource{}; }

WeatherSource WeatherSource::measured(std::vector<IrradianceRecord> records, Duration max_gap) {
  WeatherSource w;
  w.mode_ = WeatherMode::Measured;
  w.max_gap_ = max_gap;
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.instant < b.instant; });
  w.records_ = std::move(records);
  for (const auto& r : w.records_) w.keys_.push_back(r.instant.time_since_epoch().count());
  return w;
}

WeatherSource WeatherSource::tmy(std::vector<IrradianceRecord> records, Duration max_gap) {
  WeatherSource w;
  w.mode_ = WeatherMode::Tmy;
  w.max_gap_ = max_gap;
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<long long> keys(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) keys[i] = tmy_key(records[i].instant);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
  for (auto i : order) {
    if (!w.keys_.empty() && w.keys_.back() == keys[i]) continue;  // first year wins on duplicates
    w.keys_.push_back(keys[i]);
    w.records_.push_back(records[i]);
  }
  return w;
}

std::optional<IrradianceRecord> WeatherSource::lookup(const Site& site, const SunPosition& pos, Instant t) const {
  if (mode_ == WeatherMode::ClearSky) {
    IrradianceRecord r = helios::clear_sky(pos, site);
    r.instant = t;
    return r;
  }
  if (keys_.empty()) return std::nullopt;
  const long long key = mode_ == WeatherMode::Tmy ? tmy_key(t) : t.time_since_epoch().count();
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  const std::size_t hi = static_cast<std::size_t>(it - keys_.begin());
  std::optional<IrradianceRecord> out;
  if (hi < keys_.size() && keys_[hi] == key) {
    out = records_[hi];
  } else {
    std::size_t a, b;
    long long ka, kb;
    if (hi > 0 && hi < keys_.size()) {
      a = hi - 1, b = hi, ka = keys_[a], kb = keys_[b];
    } else if (mode_ == WeatherMode::Tmy) {
      a = keys_.size() - 1, b = 0, ka = keys_[a], kb = keys_[b] + kRefYearSeconds;
    } else {
      return std::nullopt;
    }
    long long k = key;
    if (k < ka) k += kRefYearSeconds;
    if (kb - ka > max_gap_.count()) return std::nullopt;
    out = lerp(records_[a], records_[b], static_cast<double>(k - ka) / static_cast<double>(kb - ka));
  }
  out->instant = t;
  return out;
}

}  // namespace helios
