#include "helios/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "helios/error.hpp"

namespace helios {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

}  // namespace

std::string report_csv(const LossReport& report) {
  std::string out = "scope,period_start,period_end,e_unshaded_kwh,e_shaded_kwh,e_loss_kwh,loss_fraction\n";
  for (const auto& r : report.rows) {
    out += r.scope + ',' + format_instant(r.start) + ',' + format_instant(r.end) + ',' + num(r.e_unshaded_kwh) + ',' +
           num(r.e_shaded_kwh) + ',' + num(r.e_loss_kwh) + ',' + num(r.loss_fraction) + '\n';
  }
  return out;
}

std::string heatmap_csv(const SunPathHeatmap& h) {
  std::string out = "azimuth_bin_deg,zenith_bin_deg,mean_effective_factor,count\n";
  for (int z = 0; z < h.zen_bins; ++z) {
    for (int a = 0; a < h.az_bins; ++a) {
      const std::size_t c = h.at_count(a, z);
      if (c == 0) continue;
      out += num(a * h.bin_deg) + ',' + num(z * h.bin_deg) + ',' + num(h.mean(a, z)) + ',' + std::to_string(c) + '\n';
    }
  }
  return out;
}

std::string mask_csv(const ShadingMask& mask, std::span<const SamplePoint> samples) {
  if (mask.shaded.size() != samples.size()) throw InputError("mask and sample counts differ");
  std::string out = "generator,module,cell,sub,shaded\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    out += mask.generator_id + ',' + std::to_string(samples[k].module) + ',' + std::to_string(samples[k].cell) + ',' +
           std::to_string(samples[k].sub) + ',' + (mask.shaded[k] ? '1' : '0') + '\n';
  }
  return out;
}

std::string depth_pgm(const DepthMap& map) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double d : map.data()) {
    if (!std::isfinite(d)) continue;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::string out = "P5\n" + std::to_string(map.width()) + ' ' + std::to_string(map.height()) + "\n65535\n";
  out.reserve(out.size() + map.data().size() * 2);
  // PGM rows run top to bottom; map row 0 is the bottom.
  for (int j = map.height() - 1; j >= 0; --j) {
    for (int i = 0; i < map.width(); ++i) {
      const double d = map.at(i, j);
      unsigned v = 65535;
      if (std::isfinite(d)) v = static_cast<unsigned>(std::lround((d - lo) / span * 65534.0));
      out.push_back(static_cast<char>(v >> 8));
      out.push_back(static_cast<char>(v & 0xff));
    }
  }
  return out;
}

nlohmann::json instant_json(const InstantResult& r) {
  using nlohmann::json;
  json gens = json::array();
  for (const auto& g : r.generators) {
    json mask = json::array();
    for (auto s : g.mask.shaded) mask.push_back(static_cast<int>(s));
    gens.push_back({{"id", g.generator_id},
                    {"normal", {g.normal.x, g.normal.y, g.normal.z}},
                    {"poa_wm2", {{"beam", g.poa.beam}, {"diffuse_sky", g.poa.diffuse_sky}, {"ground", g.poa.ground_reflected}}},
                    {"p_unshaded_w", g.p_unshaded_w},
                    {"p_shaded_w", g.p_shaded_w},
                    {"effective_factor", g.effective_factor},
                    {"geometric_factor", g.geometric_factor},
                    {"shaded_samples", g.shaded_samples},
                    {"mask", mask},
                    {"cell_fractions", g.cell_fractions}});
  }
  return {{"instant", format_instant(r.instant)},
          {"daylight", r.daylight},
          {"sun", {{"azimuth_deg", r.sun.azimuth_deg}, {"zenith_deg", r.sun.zenith_deg}}},
          {"weather",
           {{"ghi_wm2", r.weather.ghi_wm2}, {"dni_wm2", r.weather.dni_wm2}, {"dhi_wm2", r.weather.dhi_wm2}, {"temp_air_c", r.weather.temp_air_c}}},
          {"p_unshaded_w", r.p_unshaded_w()},
          {"p_shaded_w", r.p_shaded_w()},
          {"effective_factor", r.effective_factor()},
          {"generators", gens}};
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + file.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError("write failed for '" + file.string() + "'");
}

}  // namespace helios
