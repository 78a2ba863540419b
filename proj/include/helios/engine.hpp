#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "helios/scene.hpp"
#include "helios/shadow.hpp"
#include "helios/weather.hpp"

namespace helios {

struct GeneratorInstant {
  std::string generator_id;
  Vec3 normal{};
  POAIrradiance poa;
  double p_unshaded_w = 0.0;
  double p_shaded_w = 0.0;
  double effective_factor = 0.0;
  double geometric_factor = 0.0;
  std::size_t shaded_samples = 0;
  ShadingMask mask;                 // empty unless masks were requested, or at night
  std::vector<double> cell_fractions;  // same
};

struct InstantResult {
  Instant instant{};
  SunPosition sun;
  bool daylight = false;
  IrradianceRecord weather;
  std::vector<GeneratorInstant> generators;

  double p_unshaded_w() const;
  double p_shaded_w() const;
  /// Array-wide 1 − ΣP_shaded / ΣP_unshaded.
  double effective_factor() const;
};

struct EngineOptions {
  int threads = 0;  // <= 0: HELIOS_THREADS, then hardware concurrency
  bool keep_masks = false;
  std::optional<std::string> generator;  // restrict to one generator
  std::function<void(double)> progress;  // fraction done, called from workers
};

/// `requested` if positive, else HELIOS_THREADS, else the core count.
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
/// thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Sun, normal, POA, occluders, mask, per-cell irradiance, then shaded and
/// unshaded MPP on one shared grid. Night gives zero power and empty masks.
/// InputError when the weather source has no data at `t`.
InstantResult simulate_instant(const Scene& scene, const WeatherSource& weather, Instant t,
                               const EngineOptions& opt = {.keep_masks = true});

struct LossRow {
  std::string scope;  // "<generator>/total", "<generator>/month", "<generator>/day"; "all" for the array
  Instant start{}, end{};
  double e_unshaded_kwh = 0.0;
  double e_shaded_kwh = 0.0;
  double e_loss_kwh = 0.0;
  double loss_fraction = 0.0;
};

struct LossReport {
  Instant from{}, to{};
  Duration step{};
  std::vector<LossRow> rows;  // per generator then "all": total, months, days

  const LossRow& total(std::string_view generator = "all") const;
};

/// Rectangle rule, Δt = step. Rows are accumulated in instant order; months
/// and days are UTC calendar periods clipped to [from, to).
LossReport build_report(std::span<const InstantResult> results, const std::vector<std::string>& generator_ids,
                        Instant from, Instant to, Duration step);

struct SunPathHeatmap {
  double bin_deg = 2.0;
  int az_bins = 180, zen_bins = 45;
  std::vector<double> sum = std::vector<double>(180 * 45, 0.0);
  std::vector<std::size_t> count = std::vector<std::size_t>(180 * 45, 0);

  double mean(int az_bin, int zen_bin) const;
  std::size_t at_count(int az_bin, int zen_bin) const { return count[static_cast<std::size_t>(zen_bin) * az_bins + az_bin]; }
};

/// Unweighted mean array effective factor per azimuth × zenith bin over the
/// daylight results. InputError when `results` is empty.
SunPathHeatmap build_heatmap(std::span<const InstantResult> results, double bin_deg = 2.0);

struct PeriodResult {
  std::vector<InstantResult> instants;  // daylight steps with weather, sorted
  LossReport report;
  SunPathHeatmap heatmap;
  std::vector<std::string> warnings;
};

/// Evaluates every daylight step in [from, to). More than 5% of daylight
/// steps without weather data is an InputError listing the gaps; fewer are
/// skipped with a warning. Output is independent of the thread count.
PeriodResult simulate_period(const Scene& scene, const WeatherSource& weather, Instant from, Instant to,
                             Duration step, const EngineOptions& opt = {});

}  // namespace helios
