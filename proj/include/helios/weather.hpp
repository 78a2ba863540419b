#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "helios/solar.hpp"

namespace helios {

enum class WeatherMode { ClearSky, Tmy, Measured };

WeatherMode parse_weather_mode(std::string_view s);
std::string to_string(WeatherMode m);

/// Parses `timestamp_utc,ghi_wm2,dni_wm2,dhi_wm2,temp_air_c`. Lines starting
/// with `#` are comments; `# utc_offset_h=<h>` or an extra `utc_offset_h`
/// column marks timestamps without an explicit zone as local time, which is
/// converted to UTC here. Timestamps must be strictly increasing.
std::vector<IrradianceRecord> load_weather(std::string_view csv);

/// Irradiance provider for the engine.
///
/// Measured series are interpolated linearly between the bracketing rows when
/// they are at most `max_gap` apart. TMY series are matched on month, day and
/// time of day, ignoring the year, wrapping around New Year.
class WeatherSource {
 public:
  static WeatherSource clear_sky();
  static WeatherSource measured(std::vector<IrradianceRecord> records, Duration max_gap = Duration{3600});
  static WeatherSource tmy(std::vector<IrradianceRecord> records, Duration max_gap = Duration{3600});

  WeatherMode mode() const { return mode_; }
  const std::vector<IrradianceRecord>& records() const { return records_; }

  /// Record at `t` (instant set to `t`), or nullopt when the data has no
  /// coverage there. Clear sky never misses.
  std::optional<IrradianceRecord> lookup(const Site& site, const SunPosition& pos, Instant t) const;

 private:
  WeatherMode mode_ = WeatherMode::ClearSky;
  std::vector<IrradianceRecord> records_;
  std::vector<long long> keys_;  // seconds: since epoch (measured) or into a leap reference year (tmy)
  Duration max_gap_{3600};
};

}  // namespace helios
