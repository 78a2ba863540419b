#include "helios/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "helios/error.hpp"

namespace helios {
namespace {

// Per-generator data that does not change between instants.
struct Prepared {
  const PVGeneratorSpec* spec;
  CellParams params;
  ArrayWiring wiring;
  bool fixed;
  Vec3 normal;  // fixed mode only
  std::vector<SamplePoint> samples;
  std::array<Vec3, 4> footprint;
  bool panel_occluders;
};

std::vector<Prepared> prepare(const Scene& scene, const std::optional<std::string>& only) {
  std::vector<Prepared> out;
  if (only) (void)scene.generator(*only);
  for (const auto& g : scene.generators) {
    if (only && g.id != *only) continue;
    Prepared p{&g, scene.params_for(g), wiring_of(g), g.mode == MountMode::Fixed, {}, {}, {}, has_panel_occluders(scene, g.id)};
    if (p.fixed) {
      p.normal = fixed_normal(g.azimuth_deg, g.tilt_deg);
      p.samples = generator_samples(g, p.normal);
      p.footprint = generator_footprint(g, p.normal);
    }
    out.push_back(std::move(p));
  }
  return out;
}

GeneratorInstant evaluate(const Scene& scene, const Prepared& prep, const SunPosition& sun,
                          const IrradianceRecord& rec, bool keep_masks) {
  const PVGeneratorSpec& g = *prep.spec;
  GeneratorInstant out;
  out.generator_id = g.id;
  const Vec3 sun_dir = sun_direction(sun);
  out.normal = prep.fixed ? prep.normal : tracker_normal(g, sun);
  out.poa = poa(rec, sun, out.normal, scene.site.albedo);

  std::vector<SamplePoint> tracker_samples;
  const std::vector<SamplePoint>* samples = &prep.samples;
  std::array<Vec3, 4> footprint = prep.footprint;
  if (!prep.fixed) {
    tracker_samples = generator_samples(g, out.normal);
    samples = &tracker_samples;
    footprint = generator_footprint(g, out.normal);
  }

  // Shading only removes beam irradiance; without beam the mask cannot change
  // the power, so it is computed only when asked for.
  const bool need_mask = out.poa.beam > 0.0 || keep_masks;
  std::vector<double> fractions(g.cell_count(), 0.0);
  if (need_mask) {
    const LightWindow win = make_light_window(footprint, sun_dir, scene.depth_resolution, scene.depth_resolution);
    const double bias = default_bias(win.texel, sun_dir, out.normal);
    ShadingMask mask;
    if (prep.panel_occluders) {
      const auto occ = scene_occluders(scene, g.id, sun);
      mask = shade_samples(occ, win, *samples, bias);
    } else {
      mask = shade_samples(scene.object_triangles, win, *samples, bias);
    }
    mask.generator_id = g.id;
    mask.instant = rec.instant;
    out.shaded_samples = mask.shaded_count();
    fractions = cell_shaded_fractions(mask, g);
    if (keep_masks) out.mask = std::move(mask);
  }

  const double diffuse = out.poa.diffuse_total();
  const double g_full = effective_irradiance(out.poa.beam, diffuse, 0.0);
  const CellCondition full{g_full, cell_temperature(prep.params, rec.temp_air_c, g_full)};
  const bool any_shaded = out.poa.beam > 0.0 && std::any_of(fractions.begin(), fractions.end(), [](double f) { return f > 0.0; });
  if (any_shaded) {
    std::vector<std::vector<CellCondition>> scenarios(2);
    scenarios[0].assign(fractions.size(), full);
    scenarios[1].reserve(fractions.size());
    for (double f : fractions) {
      const double ge = effective_irradiance(out.poa.beam, diffuse, f);
      scenarios[1].push_back({ge, cell_temperature(prep.params, rec.temp_air_c, ge)});
    }
    const auto mpp = array_mpp(prep.wiring, prep.params, scenarios);
    out.p_unshaded_w = mpp[0].power;
    out.p_shaded_w = mpp[1].power;
  } else if (g_full > 0.0) {
    std::vector<std::vector<CellCondition>> scenarios(1);
    scenarios[0].assign(fractions.size(), full);
    out.p_unshaded_w = out.p_shaded_w = array_mpp(prep.wiring, prep.params, scenarios)[0].power;
  }
  out.effective_factor = effective_shading_factor(out.p_shaded_w, out.p_unshaded_w);
  out.geometric_factor = geometric_shading_factor(fractions, out.poa);
  if (keep_masks) out.cell_fractions = std::move(fractions);
  return out;
}

InstantResult run_instant(const Scene& scene, const std::vector<Prepared>& preps, const SunPosition& sun,
                          const IrradianceRecord& rec, bool keep_masks) {
  InstantResult r;
  r.instant = rec.instant;
  r.sun = sun;
  r.weather = rec;
  r.daylight = sun.zenith_deg < 90.0;
  for (const auto& p : preps) {
    if (!r.daylight) {
      GeneratorInstant gi;
      gi.generator_id = p.spec->id;
      r.generators.push_back(std::move(gi));
      continue;
    }
    r.generators.push_back(evaluate(scene, p, sun, rec, keep_masks));
  }
  return r;
}

std::string gaps_text(const std::vector<Instant>& missing, Duration step) {
  std::string s;
  std::size_t ranges = 0;
  for (std::size_t i = 0; i < missing.size();) {
    std::size_t j = i;
    while (j + 1 < missing.size() && missing[j + 1] - missing[j] == step) ++j;
    if (ranges == 20) {
      s += ", ...";
      break;
    }
    if (ranges++) s += ", ";
    s += format_instant(missing[i]);
    if (j > i) s += ".." + format_instant(missing[j]);
    i = j + 1;
  }
  return s;
}

}  // namespace

double InstantResult::p_unshaded_w() const {
  double s = 0.0;
  for (const auto& g : generators) s += g.p_unshaded_w;
  return s;
}

double InstantResult::p_shaded_w() const {
  double s = 0.0;
  for (const auto& g : generators) s += g.p_shaded_w;
  return s;
}

double InstantResult::effective_factor() const { return effective_shading_factor(p_shaded_w(), p_unshaded_w()); }

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HELIOS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

InstantResult simulate_instant(const Scene& scene, const WeatherSource& weather, Instant t, const EngineOptions& opt) {
  const auto preps = prepare(scene, opt.generator);
  const SunPosition sun = sun_position(scene.site, t);
  IrradianceRecord rec;
  rec.instant = t;
  if (sun.zenith_deg < 90.0) {
    const auto found = weather.lookup(scene.site, sun, t);
    if (!found) throw InputError("no weather data at " + format_instant(t));
    rec = *found;
  }
  return run_instant(scene, preps, sun, rec, opt.keep_masks);
}

const LossRow& LossReport::total(std::string_view generator) const {
  const std::string scope = std::string(generator) + "/total";
  for (const auto& r : rows)
    if (r.scope == scope) return r;
  throw InputError("report has no scope '" + scope + "'");
}

LossReport build_report(std::span<const InstantResult> results, const std::vector<std::string>& generator_ids,
                        Instant from, Instant to, Duration step) {
  using namespace std::chrono;
  LossReport rep;
  rep.from = from;
  rep.to = to;
  rep.step = step;
  const double dt_h = static_cast<double>(step.count()) / 3600.0;

  struct Acc {
    double eu = 0.0, es = 0.0, el = 0.0;
    void add(double pu, double ps, double dt) {
      eu += pu * dt / 1000.0;
      es += ps * dt / 1000.0;
      el += (pu - ps) * dt / 1000.0;
    }
  };
  auto month_start = [](Instant t) {
    const year_month_day ymd{floor<days>(t)};
    return Instant{sys_days{ymd.year() / ymd.month() / 1}};
  };
  auto next_month = [](Instant m) {
    const year_month_day ymd{floor<days>(m)};
    return Instant{sys_days{(ymd.year() / ymd.month() / 1) + months{1}}};
  };

  std::vector<std::string> scopes = generator_ids;
  scopes.push_back("all");
  for (std::size_t s = 0; s < scopes.size(); ++s) {
    const bool all = s + 1 == scopes.size();
    Acc total;
    std::map<Instant, Acc> monthly, daily;
    for (const auto& r : results) {
      double pu = 0.0, ps = 0.0;
      if (all) {
        pu = r.p_unshaded_w();
        ps = r.p_shaded_w();
      } else {
        for (const auto& g : r.generators)
          if (g.generator_id == scopes[s]) pu = g.p_unshaded_w, ps = g.p_shaded_w;
      }
      total.add(pu, ps, dt_h);
      monthly[month_start(r.instant)].add(pu, ps, dt_h);
      daily[Instant{floor<days>(r.instant)}].add(pu, ps, dt_h);
    }
    auto row = [&](const std::string& kind, Instant a, Instant b, const Acc& acc) {
      LossRow lr;
      lr.scope = scopes[s] + "/" + kind;
      lr.start = std::max(a, from);
      lr.end = std::min(b, to);
      lr.e_unshaded_kwh = acc.eu;
      lr.e_shaded_kwh = acc.es;
      lr.e_loss_kwh = acc.el;
      lr.loss_fraction = acc.eu > 0.0 ? acc.el / acc.eu : 0.0;
      rep.rows.push_back(lr);
    };
    row("total", from, to, total);
    for (const auto& [m, acc] : monthly) row("month", m, next_month(m), acc);
    for (const auto& [d, acc] : daily) row("day", d, d + days{1}, acc);
  }
  return rep;
}

double SunPathHeatmap::mean(int az_bin, int zen_bin) const {
  const std::size_t k = static_cast<std::size_t>(zen_bin) * az_bins + az_bin;
  return count[k] ? sum[k] / static_cast<double>(count[k]) : 0.0;
}

SunPathHeatmap build_heatmap(std::span<const InstantResult> results, double bin_deg) {
  if (results.empty()) throw InputError("heatmap needs at least one result");
  if (!(bin_deg > 0.0)) throw InputError("heatmap bin size must be > 0");
  SunPathHeatmap h;
  h.bin_deg = bin_deg;
  h.az_bins = static_cast<int>(std::ceil(360.0 / bin_deg - 1e-9));
  h.zen_bins = static_cast<int>(std::ceil(90.0 / bin_deg - 1e-9));
  h.sum.assign(static_cast<std::size_t>(h.az_bins) * h.zen_bins, 0.0);
  h.count.assign(h.sum.size(), 0);
  for (const auto& r : results) {
    if (!r.daylight) continue;
    const int a = std::clamp(static_cast<int>(std::floor(r.sun.azimuth_deg / bin_deg)), 0, h.az_bins - 1);
    const int z = std::clamp(static_cast<int>(std::floor(r.sun.zenith_deg / bin_deg)), 0, h.zen_bins - 1);
    const std::size_t k = static_cast<std::size_t>(z) * h.az_bins + a;
    h.sum[k] += r.effective_factor();
    ++h.count[k];
  }
  return h;
}

PeriodResult simulate_period(const Scene& scene, const WeatherSource& weather, Instant from, Instant to,
                             Duration step, const EngineOptions& opt) {
  const auto steps = daylight_steps(scene.site, from, to, step);
  const auto preps = prepare(scene, opt.generator);

  // Weather first, so missing data fails fast.
  std::vector<std::optional<IrradianceRecord>> records(steps.size());
  std::vector<SunPosition> suns(steps.size());
  std::vector<Instant> missing;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    suns[i] = sun_position(scene.site, steps[i]);
    records[i] = weather.lookup(scene.site, suns[i], steps[i]);
    if (!records[i]) missing.push_back(steps[i]);
  }
  PeriodResult out;
  if (!missing.empty()) {
    const std::string gaps = gaps_text(missing, step);
    if (missing.size() * 20 > steps.size())
      throw InputError("weather data missing for " + std::to_string(missing.size()) + " of " +
                       std::to_string(steps.size()) + " daylight steps: " + gaps);
    out.warnings.push_back("skipped " + std::to_string(missing.size()) + " daylight steps without weather data: " + gaps);
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (records[i]) todo.push_back(i);
  std::vector<InstantResult> results(todo.size());
  std::atomic<std::size_t> done{0};
  parallel_for(todo.size(), resolve_threads(opt.threads), [&](std::size_t k) {
    results[k] = run_instant(scene, preps, suns[todo[k]], *records[todo[k]], opt.keep_masks);
    const std::size_t d = done.fetch_add(1) + 1;
    if (opt.progress && (d % 64 == 0 || d == todo.size())) opt.progress(static_cast<double>(d) / todo.size());
  });

  std::size_t unclosed = 0;
  for (const auto& r : results)
    if (!closure_ok(r.weather, r.sun.zenith_deg)) ++unclosed;
  if (unclosed) out.warnings.push_back(std::to_string(unclosed) + " weather records violate GHI <= DNI cos z + DHI by more than 5%");

  std::vector<std::string> ids;
  for (const auto& p : preps) ids.push_back(p.spec->id);
  out.report = build_report(results, ids, from, to, step);
  if (!results.empty()) out.heatmap = build_heatmap(results);
  out.instants = std::move(results);
  return out;
}

}  // namespace helios
