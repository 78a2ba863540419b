#include "helios/cli.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "helios/error.hpp"
#include "helios/report_io.hpp"
#include "helios/run.hpp"
#include "helios/service.hpp"

namespace helios {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

int cmd_validate(const std::string& scene_path, std::ostream& out) {
  const Scene scene = load_scene(scene_path);
  std::size_t samples = 0;
  for (const auto& g : scene.generators) samples += g.sample_count();
  out << "objects: " << scene.objects.size() << ", triangles: " << scene.object_triangles.size()
      << ", generators: " << scene.generators.size() << ", samples: " << samples << '\n';
  for (const auto& g : scene.generators) {
    out << "generator " << g.id << ": " << g.module_rows << "x" << g.module_cols << " modules, " << g.cells_per_module()
        << " cells/module, " << g.substrings.size() << " bypass diodes/module, " << g.modules_per_string
        << " modules/string x " << g.strings_parallel << " strings, subdivision " << g.subdivision << "x"
        << g.subdivision << ", " << g.sample_count() << " samples\n";
  }
  for (const auto& w : scene.warnings) out << "warning: " << w << '\n';
  return 0;
}

struct SimulateArgs {
  std::string scene, weather_mode = "clear_sky", weather, from, to, step = "10m";
  std::string report = "report.csv", heatmap = "heatmap.csv";
  bool clear_sky = false;
  int threads = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const Scene scene = load_scene(a.scene);
  RunRequest req;
  req.weather_mode = a.clear_sky ? WeatherMode::ClearSky : parse_weather_mode(a.weather_mode);
  if (req.weather_mode != WeatherMode::ClearSky) {
    if (a.weather.empty()) throw InputError("--weather is required for " + to_string(req.weather_mode), "weather");
    req.weather_csv = read_text_file(a.weather);
  }
  req.from = parse_instant(a.from);
  req.to = parse_instant(a.to);
  if (!(req.from < req.to)) throw InputError("--from must be before --to", "to");
  req.step = parse_duration(a.step);
  req.threads = resolve_threads(a.threads);

  const RunOutput res = run_simulation(scene, req);
  write_file(a.report, res.report_csv);
  write_file(a.heatmap, res.heatmap_csv);
  for (const auto& w : res.warnings) err << "warning: " << w << '\n';
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "instants: " << res.instants << '\n'
      << "loss fraction: " << fixed(res.loss_fraction, 4) << '\n'
      << "wall-clock: " << fixed(secs, 1) << " s (" << req.threads << " threads)\n";
  return 0;
}

struct ShadowsArgs {
  std::string scene, at, generator, mask = "mask.csv", depth, json;
};

int cmd_shadows(const ShadowsArgs& a, std::ostream& out) {
  const Scene scene = load_scene(a.scene);
  const Instant at = parse_instant(a.at);
  const PVGeneratorSpec& g = a.generator.empty() ? [&]() -> const PVGeneratorSpec& {
    if (scene.generators.empty()) throw InputError("scene has no generators", "generator");
    return scene.generators.front();
  }() : scene.generator(a.generator);

  const SunPosition sun = sun_position(scene.site, at);
  const Vec3 sun_dir = sun_direction(sun);  // DomainError at night
  EngineOptions opt;
  opt.keep_masks = true;
  opt.generator = g.id;
  const InstantResult r = simulate_instant(scene, WeatherSource::clear_sky(), at, opt);
  const GeneratorInstant& gi = r.generators.front();

  const auto samples = generator_samples(g, gi.normal);
  write_file(a.mask, mask_csv(gi.mask, samples));
  if (!a.depth.empty()) {
    const auto occ = scene_occluders(scene, g.id, sun);
    const auto footprint = generator_footprint(g, gi.normal);
    write_file(a.depth, depth_pgm(build_depth_map(occ, sun_dir, footprint, scene.depth_resolution, scene.depth_resolution)));
  }
  if (!a.json.empty()) write_file(a.json, instant_json(r).dump(2) + "\n");
  out << "sun: azimuth " << fixed(sun.azimuth_deg, 2) << " deg, zenith " << fixed(sun.zenith_deg, 2) << " deg\n"
      << "generator " << g.id << ": " << gi.shaded_samples << " of " << samples.size() << " samples shaded, effective factor "
      << fixed(gi.effective_factor, 4) << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PV shading-loss simulator", "helios"};
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags win");
  app.require_subcommand(1);

  std::string validate_scene;
  auto* validate = app.add_subcommand("validate", "Parse a scene and its meshes and print a summary");
  validate->add_option("scene,--scene", validate_scene, "Scene JSON")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a period simulation and write report and heatmap CSVs");
  simulate->add_option("--scene", sim.scene, "Scene JSON")->required();
  simulate->add_flag("--clear-sky", sim.clear_sky, "Use the clear-sky model (same as --weather-mode clear_sky)");
  simulate->add_option("--weather-mode", sim.weather_mode, "clear_sky | tmy | measured");
  simulate->add_option("--weather", sim.weather, "Weather CSV for tmy and measured modes");
  simulate->add_option("--from", sim.from, "Period start (ISO-8601, UTC)")->required();
  simulate->add_option("--to", sim.to, "Period end, exclusive")->required();
  simulate->add_option("--step", sim.step, "Time step, e.g. 10m or 1h");
  simulate->add_option("--report", sim.report, "Report CSV output path");
  simulate->add_option("--heatmap", sim.heatmap, "Heatmap CSV output path");
  simulate->add_option("--threads", sim.threads, "Worker threads (default HELIOS_THREADS, then all cores)");

  ShadowsArgs sh;
  auto* shadows = app.add_subcommand("shadows", "Shading mask and depth map of one generator at one instant");
  shadows->add_option("--scene", sh.scene, "Scene JSON")->required();
  shadows->add_option("--at", sh.at, "Instant (ISO-8601)")->required();
  shadows->add_option("--generator", sh.generator, "Generator id (default: the first)");
  shadows->add_option("--mask", sh.mask, "Mask CSV output path");
  shadows->add_option("--depth", sh.depth, "16-bit PGM depth map output path");
  shadows->add_option("--json", sh.json, "Instant dump JSON output path");

  ServiceConfig svc;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve_cmd->add_option("--port", port, "TCP port");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--data-dir", svc.data_dir, "Directory for scene revisions and job results");
  serve_cmd->add_option("--threads", svc.threads, "Worker threads per job");
  serve_cmd->add_option("--cors-origin", svc.cors_origin, "Allowed CORS origin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Input);
  }

  try {
    if (*validate) return cmd_validate(validate_scene, out);
    if (*simulate) return cmd_simulate(sim, out, err);
    if (*shadows) return cmd_shadows(sh, out);
    if (*serve_cmd) {
      svc.threads = resolve_threads(svc.threads);
      out << "listening on http://" << host << ":" << port << std::endl;
      return serve(svc, host, port);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace helios
