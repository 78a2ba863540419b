#include "helios/run.hpp"

#include "helios/error.hpp"
#include "helios/report_io.hpp"

namespace helios {
namespace {

std::string field_string(const Json& params, const char* key) {
  const auto it = params.find(key);
  if (it == params.end() || !it->is_string()) throw InputError(std::string(key) + " must be a string", key);
  return it->get<std::string>();
}

template <class F>
auto with_field(const char* key, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError(std::string(key) + ": " + e.what(), key);
  }
}

}  // namespace

RunRequest run_request_from_json(const Json& params) {
  if (!params.is_object()) throw InputError("job parameters must be a JSON object");
  RunRequest req;
  if (params.contains("weather_mode"))
    req.weather_mode = with_field("weather_mode", [&] { return parse_weather_mode(field_string(params, "weather_mode")); });
  req.from = with_field("from", [&] { return parse_instant(field_string(params, "from")); });
  req.to = with_field("to", [&] { return parse_instant(field_string(params, "to")); });
  if (params.contains("step")) req.step = with_field("step", [&] { return parse_duration(field_string(params, "step")); });
  if (!(req.from < req.to)) throw InputError("from must be before to", "to");
  if (params.contains("threads")) {
    if (!params["threads"].is_number_integer()) throw InputError("threads must be an integer", "threads");
    req.threads = params["threads"].get<int>();
  }
  if (req.weather_mode != WeatherMode::ClearSky) {
    if (params.contains("weather_csv")) {
      req.weather_csv = field_string(params, "weather_csv");
    } else if (params.contains("weather_path")) {
      req.weather_csv = with_field("weather_path", [&] { return read_text_file(field_string(params, "weather_path")); });
    } else {
      throw InputError("weather_csv or weather_path is required for " + to_string(req.weather_mode), "weather_csv");
    }
  }
  return req;
}

RunOutput run_simulation(const Scene& scene, const RunRequest& req, std::function<void(double)> progress) {
  WeatherSource weather = WeatherSource::clear_sky();
  if (req.weather_mode == WeatherMode::Tmy) weather = WeatherSource::tmy(load_weather(req.weather_csv));
  if (req.weather_mode == WeatherMode::Measured) weather = WeatherSource::measured(load_weather(req.weather_csv));

  EngineOptions opt;
  opt.threads = req.threads;
  opt.progress = std::move(progress);
  const PeriodResult res = simulate_period(scene, weather, req.from, req.to, req.step, opt);

  RunOutput out;
  out.report_csv = report_csv(res.report);
  out.heatmap_csv = heatmap_csv(res.heatmap);
  out.loss_fraction = res.report.total().loss_fraction;
  out.instants = res.instants.size();
  out.warnings = res.warnings;
  return out;
}

}  // namespace helios
