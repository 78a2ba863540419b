#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace helios {

/// UTC instant with one-second resolution.
using Instant = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

/// Accepts `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM[:SS]` with optional `Z` or
/// `±HH[:MM]` offset (a space may replace `T`). Throws InputError.
Instant parse_instant(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_instant(Instant t);

/// `YYYY-MM-DD`
std::string format_date(Instant t);

/// `10m`, `1h`, `30s`, `1d`, or a bare number of seconds. Must be positive.
Duration parse_duration(std::string_view text);

/// Julian date (UT) of an instant.
double julian_day(Instant t);

/// Fractional calendar year, used for ΔT.
double decimal_year(Instant t);

}  // namespace helios
