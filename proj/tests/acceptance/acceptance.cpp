// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cli_runner.hpp"
#include "electrical_cases.hpp"
#include "helios/engine.hpp"
#include "helios/fixtures.hpp"
#include "helios/report_io.hpp"
#include "helios/run.hpp"
#include "helios/shadow.hpp"
#include "helios/solar.hpp"
#include "oracles.hpp"
#include "service_harness.hpp"
#include "shadow_scenes.hpp"
#include "solar_reference.hpp"
#include "test_util.hpp"

using namespace helios;
namespace fx = helios::fixtures;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(const char* name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Rasterizer against the ray-cast oracle.
void oracle_equivalence() {
  const auto t0 = Clock::now();
  constexpr int kScenes = 50, kSuns = 100;
  const int threads = resolve_threads(0);
  std::vector<scenes::Agreement> per(kScenes);
  parallel_for(kScenes, threads, [&](std::size_t s) {
    std::mt19937_64 rng(1000 + s);
    const auto p = scenes::random_patch(rng, 200, 1000);
    for (int k = 0; k < kSuns; ++k) {
      const Vec3 sun = scenes::random_sun(rng);
      const LightWindow win = make_light_window(p.footprint, sun, 2048, 2048);
      scenes::tally(per[s], p, sun, shade_samples(p.occluders, win, p.samples, default_bias(win.texel, sun, p.normal)),
                    win.texel);
    }
  });
  scenes::Agreement a;
  for (const auto& x : per) {
    a.total += x.total, a.agree += x.agree;
    a.beyond_15 += x.beyond_15, a.agree_15 += x.agree_15;
    a.beyond_3 += x.beyond_3, a.agree_3 += x.agree_3;
  }
  const double r15 = static_cast<double>(a.agree_15) / static_cast<double>(a.beyond_15);
  // The budget is for 4 cores. Scenes are independent, so fewer threads are
  // scaled linearly; more than 4 are not credited.
  const double secs = seconds_since(t0);
  const double on_four = secs * std::min(threads, 4) / 4.0;
  const bool ok = r15 >= 0.999 && a.agree_3 == a.beyond_3 && on_four < 60.0;
  verdict("oracle-equivalence", ok,
          fmt("%.5f%% agree beyond 1.5 texels (%ld samples), %ld/%ld beyond 3, %.4f%% overall; "
              "%.1f s with %d thread(s), %.1f s projected on 4 cores (budget 60 s)",
              100.0 * r15, a.beyond_15, a.agree_3, a.beyond_3, 100.0 * a.agree / a.total, secs, threads, on_four));
}

struct AnnualRun {
  PeriodResult result;
  double seconds = 0.0;
};

// 2. Annual clear-sky run on the 80k-triangle house.
AnnualRun performance(const Scene& house) {
  AnnualRun run;
  EngineOptions opt;
  opt.threads = resolve_threads(0);
  const auto t0 = Clock::now();
  run.result = simulate_period(house, WeatherSource::clear_sky(), parse_instant("2023-01-01"), parse_instant("2024-01-01"),
                               Duration{600}, opt);
  run.seconds = seconds_since(t0);
  std::size_t samples = 0;
  for (const auto& g : house.generators) samples += g.sample_count();
  verdict("performance", run.seconds <= 16 * 60,
          fmt("%zu instants x %zu samples, %zu triangles: %.1f s with %d thread(s), budget 960 s",
              run.result.instants.size(), samples, house.object_triangles.size(), run.seconds, opt.threads));
  return run;
}

// 3. Daylight steps in a year at latitude 40.
void daylight_count() {
  Site site;
  site.latitude_deg = 40.0;
  site.longitude_deg = 0.0;
  const auto steps = daylight_steps(site, parse_instant("2023-01-01"), parse_instant("2024-01-01"), Duration{600});
  const double n = static_cast<double>(steps.size());
  verdict("daylight-count", std::abs(n - 26000.0) <= 2600.0, fmt("%zu instants, target 26000 +/- 10%%", steps.size()));
}

// 4. Module MPP under half shading, and composed networks.
void electrical() {
  using namespace elcases;
  const CellParams p = test_params();
  ArrayWiring w{36, contiguous_substrings(36, 2), 1, 1, 1};
  std::vector<CellCondition> lit(36, {1000.0, 25.0}), half = lit;
  for (int c : w.substrings[1]) half[static_cast<std::size_t>(c)] = {0.0, 25.0};
  const auto mpp = array_mpp(w, p, std::vector<std::vector<CellCondition>>{lit, half});
  const double ratio = mpp[1].power / mpp[0].power;
  const double ref_lit = oracle::dense_scan_mpp(chains_of({w, lit}, p)[0], 100000);
  const double ref_half = oracle::dense_scan_mpp(chains_of({w, half}, p)[0], 100000);
  const double ref_ratio = ref_half / ref_lit;
  const double scan_err = std::max(std::abs(mpp[0].power - ref_lit) / ref_lit, std::abs(mpp[1].power - ref_half) / ref_half);

  std::mt19937_64 rng(77);
  double worst = 0.0;
  int trials = 0;
  for (const CellParams& q : {test_params(), resistive_params()})
    for (int k = 0; k < 100; ++k, ++trials) worst = std::max(worst, max_relative_error(random_network(rng), q));

  const bool ok = ratio >= 0.45 && ratio <= 0.55 && ref_ratio >= 0.45 && ref_ratio <= 0.55 && scan_err <= 1e-4 && worst <= 1e-4;
  verdict("electrical", ok,
          fmt("half-shaded MPP ratio %.4f (dense scan %.4f, MPP error %.2e); %d networks of 2-6 cells, worst error %.2e",
              ratio, ref_ratio, scan_err, trials, worst));
}

// 5. Sun position against the reference table.
void solar_reference() {
  double worst_zen = 0.0, worst_az = 0.0;
  for (const auto& c : solar_ref::kCases) {
    Site s;
    s.latitude_deg = c.lat;
    s.longitude_deg = c.lon;
    s.altitude_m = c.alt;
    const SunPosition pos = sun_position(s, parse_instant(c.instant));
    const double daz = std::abs(std::remainder(pos.azimuth_deg - c.azimuth, 360.0));
    worst_zen = std::max(worst_zen, std::abs(pos.zenith_deg - c.zenith));
    worst_az = std::max(worst_az, daz);
  }
  verdict("solar-position", worst_zen <= 0.05 && worst_az <= 0.05,
          fmt("%zu cases, worst zenith error %.4f deg, worst azimuth error %.4f deg", std::size(solar_ref::kCases),
              worst_zen, worst_az));
}

double region_mean(const SunPathHeatmap& h, auto&& in_region, int& bins) {
  double sum = 0.0;
  bins = 0;
  for (int z = 0; z < h.zen_bins; ++z)
    for (int a = 0; a < h.az_bins; ++a) {
      if (h.at_count(a, z) == 0) continue;
      if (!in_region((a + 0.5) * h.bin_deg, (z + 0.5) * h.bin_deg)) continue;
      sum += h.mean(a, z);
      ++bins;
    }
  return bins ? sum / bins : 0.0;
}

// 6. Properties.
void properties(const Scene& house, const AnnualRun& annual) {
  std::vector<std::string> bad;

  // Superset masks never raise array power.
  {
    std::mt19937_64 rng(11);
    const CellParams p{};
    ArrayWiring w{36, contiguous_substrings(36, 3), 6, 3, 2};
    std::uniform_int_distribution<int> cell(0, 6 * 36 - 1), frac(1, 9);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::vector<CellCondition>> chain;
      std::vector<double> f(6 * 36, 0.0);
      for (int step = 0; step < 8; ++step) {
        std::vector<CellCondition> s;
        for (double x : f) s.push_back({effective_irradiance(900.0, 80.0, x), 25.0});
        chain.push_back(s);
        for (int k = 0; k < 10; ++k) {
          auto& x = f[static_cast<std::size_t>(cell(rng))];
          x = std::max(x, frac(rng) / 9.0);
        }
      }
      const auto mpp = array_mpp(w, p, chain);
      for (std::size_t k = 1; k < mpp.size(); ++k)
        if (mpp[k].power > mpp[k - 1].power) bad.push_back(fmt("monotonicity trial %d step %zu", trial, k));
    }
  }

  // Effective factor at least geometric, over every instant of the annual run.
  std::size_t checked = 0;
  double margin = INFINITY;
  for (const auto& r : annual.result.instants)
    for (const auto& g : r.generators) {
      ++checked;
      margin = std::min(margin, g.effective_factor - g.geometric_factor);
    }
  if (!(margin >= -1e-3)) bad.push_back(fmt("effective below geometric by %.2e", -margin));

  // Whole-world scaling.
  double scale_err = 0.0;
  {
    const auto base = fx::wall_bike();
    fx::Fixture big = base;
    big.scene = testutil::scaled(base.scene, 2.5);
    const Instant from = parse_instant("2023-12-21"), to = parse_instant("2023-12-22");
    const PeriodResult a = simulate_period(fx::load(base), WeatherSource::clear_sky(), from, to, Duration{600});
    const PeriodResult b = simulate_period(fx::load(big), WeatherSource::clear_sky(), from, to, Duration{600});
    if (a.instants.size() != b.instants.size()) bad.push_back("scaled run has a different instant count");
    for (std::size_t k = 0; k < std::min(a.instants.size(), b.instants.size()); ++k)
      scale_err = std::max(scale_err, std::abs(a.instants[k].effective_factor() - b.instants[k].effective_factor()));
    scale_err = std::max(scale_err, std::abs(a.report.total().loss_fraction - b.report.total().loss_fraction));
    if (scale_err > 1e-9) bad.push_back(fmt("scale invariance error %.2e", scale_err));
  }

  // Thread count does not change a byte.
  {
    const Instant from = parse_instant("2023-06-21"), to = parse_instant("2023-06-22");
    std::string report, heat;
    for (int threads : {1, 2, 4, 7}) {
      EngineOptions opt;
      opt.threads = threads;
      const PeriodResult p = simulate_period(house, WeatherSource::clear_sky(), from, to, Duration{600}, opt);
      if (threads == 1) {
        report = report_csv(p.report);
        heat = heatmap_csv(p.heatmap);
      } else if (report_csv(p.report) != report || heatmap_csv(p.heatmap) != heat) {
        bad.push_back(fmt("report differs at %d threads", threads));
      }
    }
  }

  // Energy accounting on the annual run.
  double closure = 0.0;
  {
    const LossReport& rep = annual.result.report;
    double direct = 0.0, months = 0.0, days = 0.0;
    for (const auto& r : annual.result.instants) direct += (r.p_unshaded_w() - r.p_shaded_w()) * (600.0 / 3600.0) / 1000.0;
    for (const auto& row : rep.rows) {
      if (row.scope == "all/month") months += row.e_loss_kwh;
      if (row.scope == "all/day") days += row.e_loss_kwh;
    }
    const double total = rep.total().e_loss_kwh;
    for (double x : {direct, months, days}) closure = std::max(closure, std::abs(x - total) / total);
    if (!(closure <= 1e-9)) bad.push_back(fmt("energy closure %.2e", closure));
  }

  // Where the house loses energy on the sun path.
  int n_wm = 0, n_se = 0, n_rest = 0;
  const auto& h = annual.result.heatmap;
  auto winter_morning = [](double az, double zen) { return az >= 100 && az < 180 && zen >= 60; };
  auto summer_evening = [](double az, double) { return az >= 250; };
  const double wm = region_mean(h, winter_morning, n_wm);
  const double se = region_mean(h, summer_evening, n_se);
  const double rest = region_mean(h, [&](double az, double zen) { return !winter_morning(az, zen) && !summer_evening(az, zen); }, n_rest);
  if (!(wm > 10 * rest && se > 10 * rest && wm > 0.05 && se > 0.05))
    bad.push_back(fmt("heatmap regions not separated (%.4f, %.4f vs %.4f)", wm, se, rest));

  std::string detail = fmt(
      "monotone; min(effective-geometric) %.2e over %zu generator-instants; scale error %.1e; threads 1/2/4/7 identical; "
      "closure %.1e; heatmap mean factor low-SE-sun %.3f (%d bins), west-sun %.3f (%d bins), elsewhere %.4f (%d bins)",
      margin, checked, scale_err, closure, wm, n_wm, se, n_se, rest, n_rest);
  for (const auto& b : bad) detail += "; " + b;
  verdict("properties", bad.empty(), detail);
}

// 7. Same run through the CLI and the job endpoints.
void cli_api_parity() {
  const auto dir = testutil::temp_dir("acceptance-parity");
  std::vector<std::string> bad;
  int compared = 0;
  for (const auto& [name, fixture] : {std::pair{"wall_bike", fx::wall_bike()}, std::pair{"house", fx::house_tree_streetlight()}}) {
    const auto scene_path = fx::write(fixture, dir / name);
    const auto report = dir / name / "report.csv", heatmap = dir / name / "heatmap.csv";
    const std::string from = "2023-01-01T00:00:00Z", to = std::string(name) == "house" ? "2023-02-01T00:00:00Z" : "2023-01-08T00:00:00Z";
    const auto r = clirun::run("simulate --scene " + clirun::quoted(scene_path.string()) + " --clear-sky --from " + from + " --to " +
                               to + " --step 10m --report " + clirun::quoted(report.string()) + " --heatmap " +
                               clirun::quoted(heatmap.string()));
    if (r.code != 0) {
      bad.push_back(std::string(name) + ": CLI exit " + std::to_string(r.code));
      continue;
    }
    harness::LiveService live(dir / "data", resolve_threads(0));
    auto c = live.client();
    auto posted = c.Post("/scenes", harness::inline_meshes(fixture).dump(), "application/json");
    if (!posted || posted->status != 201) {
      bad.push_back(std::string(name) + ": scene upload failed");
      continue;
    }
    const std::string sid = harness::body_of(posted)["id"];
    const Json params{{"weather_mode", "clear_sky"}, {"from", from}, {"to", to}, {"step", "10m"}};
    const std::string jid = harness::body_of(c.Post("/scenes/" + sid + "/jobs", params.dump(), "application/json"))["id"];
    if (harness::wait_for_job(c, jid)["state"] != "done") {
      bad.push_back(std::string(name) + ": job did not finish");
      continue;
    }
    if (c.Get("/jobs/" + jid + "/report")->body != read_text_file(report)) bad.push_back(std::string(name) + ": report differs");
    if (c.Get("/jobs/" + jid + "/heatmap")->body != read_text_file(heatmap)) bad.push_back(std::string(name) + ": heatmap differs");
    compared += 2;
  }
  std::filesystem::remove_all(dir);
  std::string detail = fmt("%d files compared byte for byte (wall_bike one week, house one month)", compared);
  for (const auto& b : bad) detail += "; " + b;
  verdict("cli-api-parity", bad.empty() && compared == 4, detail);
}

}  // namespace

int main() {
  oracle_equivalence();
  const Scene house = fx::load(fx::house_tree_streetlight());
  const AnnualRun annual = performance(house);
  daylight_count();
  electrical();
  solar_reference();
  properties(house, annual);
  cli_api_parity();
  std::printf("acceptance: %d of 7 criteria failed\n", failures);
  return failures ? 1 : 0;
}
