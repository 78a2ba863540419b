#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "helios/engine.hpp"
#include "helios/scene_json.hpp"

namespace helios {

/// One simulation as requested from the CLI or a service job.
struct RunRequest {
  WeatherMode weather_mode = WeatherMode::ClearSky;
  std::string weather_csv;  // content, for tmy and measured
  Instant from{}, to{};
  Duration step{600};
  int threads = 0;
};

struct RunOutput {
  std::string report_csv;
  std::string heatmap_csv;
  double loss_fraction = 0.0;
  std::size_t instants = 0;
  std::vector<std::string> warnings;
};

/// Fields `weather_mode`, `weather_csv` or `weather_path`, `from`, `to`,
/// `step` (default "10m"), `threads`. InputError names the offending field.
RunRequest run_request_from_json(const Json& params);

RunOutput run_simulation(const Scene& scene, const RunRequest& req, std::function<void(double)> progress = {});

}  // namespace helios
