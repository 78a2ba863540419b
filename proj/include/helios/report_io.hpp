#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "helios/engine.hpp"

namespace helios {

/// `scope,period_start,period_end,e_unshaded_kwh,e_shaded_kwh,e_loss_kwh,loss_fraction`
std::string report_csv(const LossReport& report);

/// `azimuth_bin_deg,zenith_bin_deg,mean_effective_factor,count`, non-empty
/// bins only, bins named by their lower edge.
std::string heatmap_csv(const SunPathHeatmap& heatmap);

/// `generator,module,cell,sub,shaded`
std::string mask_csv(const ShadingMask& mask, std::span<const SamplePoint> samples);

/// Binary 16-bit PGM. Finite depths map linearly onto 0..65534 (nearest is
/// darkest), empty texels are 65535.
std::string depth_pgm(const DepthMap& map);

/// Single-instant dump for the studio: sun, weather, and per generator the
/// powers, factors, mask and per-cell fractions.
nlohmann::json instant_json(const InstantResult& r);

void write_file(const std::filesystem::path& file, const std::string& content);

}  // namespace helios
