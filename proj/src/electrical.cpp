#include "helios/electrical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "helios/error.hpp"

namespace helios {
namespace {

constexpr double kBoltzmann = 1.380649e-23;
constexpr double kCharge = 1.602176634e-19;
constexpr int kMaxIterations = 100;

double safe_exp(double x) { return std::exp(std::min(x, 700.0)); }

std::string describe(const CellCondition& c, const char* var, double value) {
  std::ostringstream os;
  os.precision(17);
  os << "G_eff=" << c.g_eff_wm2 << " W/m2, T=" << c.t_cell_c << " C, " << var << "=" << value;
  return os.str();
}

}  // namespace

void validate(const CellParams& p, const std::string& path) {
  auto check = [&](bool ok, const char* field, const char* rule) {
    if (!ok) throw InputError(path + "." + field + " " + rule, path + "." + field);
  };
  check(p.iph_stc_a > 0.0 && std::isfinite(p.iph_stc_a), "iph_stc_a", "must be > 0");
  check(p.voc_stc_v > 0.0 && std::isfinite(p.voc_stc_v), "voc_stc_v", "must be > 0");
  check(p.n >= 1.0 && p.n <= 2.0, "n", "must be in [1, 2]");
  check(p.rs_ohm >= 0.0 && std::isfinite(p.rs_ohm), "rs_ohm", "must be >= 0");
  check(p.rsh_ohm > 0.0, "rsh_ohm", "must be > 0");
  check(std::isfinite(p.alpha_isc_per_c), "alpha_isc_per_c", "must be finite");
  check(p.bypass_drop_v >= 0.0 && std::isfinite(p.bypass_drop_v), "bypass_drop_v", "must be >= 0");
  check(p.noct_c > 20.0 && std::isfinite(p.noct_c), "noct_c", "must be > 20");
  check(p.area_m2 >= 0.0 && std::isfinite(p.area_m2), "area_m2", "must be >= 0");
}

double thermal_voltage(double t_cell_c) { return kBoltzmann * (t_cell_c + 273.15) / kCharge; }

double saturation_current(const CellParams& p) {
  return p.iph_stc_a / std::expm1(p.voc_stc_v / (p.n * thermal_voltage(25.0)));
}

double cell_temperature(const CellParams& p, double t_air_c, double g_eff_wm2) {
  if (p.temperature_model == TemperatureModel::Constant) return 25.0;
  return t_air_c + (p.noct_c - 20.0) / 800.0 * g_eff_wm2;
}

double effective_irradiance(double beam_wm2, double diffuse_wm2, double shaded_fraction) {
  return (1.0 - shaded_fraction) * beam_wm2 + diffuse_wm2;
}

CellModel::CellModel(const CellParams& p, CellCondition c)
    : cond_(c),
      iph_(std::max(0.0, p.iph_stc_a * (c.g_eff_wm2 / 1000.0) * (1.0 + p.alpha_isc_per_c * (c.t_cell_c - 25.0)))),
      i0_(saturation_current(p)),
      a_(p.n * thermal_voltage(c.t_cell_c)),
      rs_(p.rs_ohm),
      rsh_(p.rsh_ohm) {
  isc_ = std::max(0.0, current_at(0.0));
  voc_ = voltage_at(0.0);
}

double CellModel::current_at(double v) const {
  // Rs = 0 makes the equation explicit.
  double i = iph_ - i0_ * (safe_exp(v / a_) - 1.0) - v / rsh_;
  if (rs_ == 0.0) return i;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double x = v + i * rs_;
    const double e = safe_exp(x / a_);
    const double f = iph_ - i0_ * (e - 1.0) - x / rsh_ - i;
    const double df = -i0_ * rs_ / a_ * e - rs_ / rsh_ - 1.0;
    const double step = f / df;
    i -= step;
    if (std::abs(step) < 1e-10) return i;
  }
  throw NumericError("cell current did not converge: " + describe(cond_, "V", v));
}

double CellModel::voltage_at(double current) const {
  // Solve for the junction voltage x = V + I·Rs. h(x) is concave and
  // decreasing; both starting points lie right of the root, so Newton
  // converges monotonically.
  const double excess = iph_ + i0_ - current;
  double x = excess > i0_ ? a_ * std::log(excess / i0_) : -rsh_ * (current - iph_ - i0_);
  if (excess > 0.0 && excess <= i0_) x = a_ * std::log(excess / i0_);
  for (int it = 0; it < kMaxIterations; ++it) {
    const double e = safe_exp(x / a_);
    const double h = excess - i0_ * e - x / rsh_;
    const double dh = -i0_ / a_ * e - 1.0 / rsh_;
    const double step = h / dh;
    x -= step;
    if (std::abs(step) <= 1e-13 + 1e-14 * std::abs(x)) return x - current * rs_;
  }
  throw NumericError("cell voltage did not converge: " + describe(cond_, "I", current));
}

bool is_monotone(std::span<const IVPoint> pts, double tol_v) {
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (pts[k].current < pts[k - 1].current) return false;
    if (pts[k].voltage > pts[k - 1].voltage + tol_v) return false;
  }
  return true;
}

IVCurve::IVCurve(std::vector<IVPoint> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw NumericError("IV curve needs at least 2 points");
  for (const auto& p : points_)
    if (!std::isfinite(p.current) || !std::isfinite(p.voltage)) throw NumericError("IV curve has non-finite samples");
  if (!is_monotone(points_)) throw NumericError("IV curve is not monotone");
}

double IVCurve::voltage_at(double current) const {
  const auto& pts = points_;
  if (current <= pts.front().current) return pts.front().voltage;
  if (current >= pts.back().current) {
    // Top of a trailing vertical step.
    auto it = std::lower_bound(pts.begin(), pts.end(), current,
                               [](const IVPoint& p, double i) { return p.current < i; });
    return it == pts.end() ? pts.back().voltage : it->voltage;
  }
  const auto it =
      std::lower_bound(pts.begin(), pts.end(), current, [](const IVPoint& p, double i) { return p.current < i; });
  if (it->current == current) return it->voltage;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double t = (current - a.current) / (b.current - a.current);
  return a.voltage + t * (b.voltage - a.voltage);
}

double IVCurve::current_at(double voltage) const {
  const auto& pts = points_;
  // On a flat stretch (a conducting bypass) take its onset.
  const auto first = std::partition_point(pts.begin(), pts.end(), [voltage](const IVPoint& p) { return p.voltage > voltage; });
  if (first != pts.end() && first->voltage == voltage) return first->current;
  const auto it = first;
  if (it == pts.begin()) return pts.front().current;
  if (it == pts.end()) return pts.back().current;
  const auto& a = *(it - 1);
  const auto& b = *it;
  const double t = (a.voltage - voltage) / (a.voltage - b.voltage);
  return a.current + t * (b.current - a.current);
}

bool IVCurve::same_samples(const IVCurve& other) const {
  if (points_.size() != other.points_.size()) return false;
  for (std::size_t k = 0; k < points_.size(); ++k)
    if (points_[k].current != other.points_[k].current || points_[k].voltage != other.points_[k].voltage) return false;
  return true;
}

std::vector<double> current_grid(std::span<const CellModel> cells, std::size_t base_points) {
  double i_max = 0.0;
  for (const auto& c : cells) i_max = std::max(i_max, c.isc());
  if (!(i_max > 0.0)) return {0.0, 0.0};

  std::vector<double> grid;
  grid.reserve(base_points + cells.size() * (kKneePointsPerCell + 48));
  const std::size_t n = std::max<std::size_t>(base_points, 2);
  for (std::size_t k = 0; k < n; ++k) grid.push_back(i_max * static_cast<double>(k) / static_cast<double>(n - 1));

  // Cells sharing the same short-circuit current have the same knee.
  std::vector<const CellModel*> distinct;
  for (const auto& c : cells) {
    if (!(c.isc() > 0.0)) continue;
    const bool dup = std::any_of(distinct.begin(), distinct.end(),
                                 [&](const CellModel* d) { return d->condition() == c.condition(); });
    if (!dup) distinct.push_back(&c);
  }
  for (const CellModel* c : distinct) {
    const double voc = c->voc();
    for (std::size_t k = 1; k < kKneePointsPerCell; ++k) {
      const double i = c->current_at(voc * static_cast<double>(k) / kKneePointsPerCell);
      if (i > 0.0 && i < i_max) grid.push_back(i);
    }
    grid.push_back(c->isc());
    if (c->isc() < i_max) {
      for (int e = 50; e >= 5; --e) {
        const double i = c->isc() + i_max * std::pow(10.0, -0.2 * e);
        if (i < i_max) grid.push_back(i);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

// Per-cell voltages on a grid, forced non-increasing to absorb solver noise.
std::vector<double> cell_voltages(const CellModel& cell, std::span<const double> grid) {
  std::vector<double> v(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    v[g] = cell.voltage_at(grid[g]);
    if (g > 0 && v[g] > v[g - 1]) v[g] = v[g - 1];
  }
  return v;
}

IVCurve make_curve(std::span<const double> grid, std::span<const double> volts) {
  std::vector<IVPoint> pts(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) pts[g] = {grid[g], volts[g]};
  return IVCurve(std::move(pts));
}

// (type index, count) pairs sorted by type: the series content of a substring.
using Histogram = std::vector<std::pair<int, int>>;

std::vector<double> substring_voltages(const Histogram& hist, const std::vector<std::vector<double>>& type_volts,
                                       std::size_t grid_size, double bypass_drop) {
  std::vector<double> v(grid_size, 0.0);
  for (const auto& [type, count] : hist) {
    const auto& tv = type_volts[static_cast<std::size_t>(type)];
    for (std::size_t g = 0; g < grid_size; ++g) v[g] += count * tv[g];
  }
  for (auto& x : v) x = std::max(x, -bypass_drop);
  return v;
}

}  // namespace

IVCurve substring_iv(std::span<const CellCondition> cells, const CellParams& p, double bypass_drop,
                     std::span<const double> grid) {
  if (cells.empty()) throw InputError("substring needs at least one cell");
  std::map<CellCondition, int> index;
  std::vector<CellModel> models;
  Histogram hist;
  for (const auto& c : cells) {
    auto [it, inserted] = index.try_emplace(c, static_cast<int>(models.size()));
    if (inserted) models.emplace_back(p, c);
  }
  std::vector<int> counts(models.size(), 0);
  for (const auto& c : cells) ++counts[static_cast<std::size_t>(index.at(c))];
  std::vector<std::vector<double>> type_volts;
  for (std::size_t t = 0; t < models.size(); ++t) {
    type_volts.push_back(cell_voltages(models[t], grid));
    hist.emplace_back(static_cast<int>(t), counts[t]);
  }
  return make_curve(grid, substring_voltages(hist, type_volts, grid.size(), bypass_drop));
}

IVCurve substring_iv(std::span<const CellCondition> cells, const CellParams& p, double bypass_drop) {
  if (cells.empty()) throw InputError("substring needs at least one cell");
  std::vector<CellModel> models;
  for (const auto& c : cells) models.emplace_back(p, c);
  const auto grid = current_grid(models);
  return substring_iv(cells, p, bypass_drop, grid);
}

IVCurve series_iv(std::span<const IVCurve> curves) {
  if (curves.empty()) throw InputError("series composition needs at least one curve");
  const auto first = curves.front().points();
  const bool shared_grid = std::all_of(curves.begin(), curves.end(), [&](const IVCurve& c) {
    const auto pts = c.points();
    if (pts.size() != first.size()) return false;
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (pts[k].current != first[k].current) return false;
    return true;
  });

  std::vector<IVPoint> out;
  if (shared_grid) {
    out.assign(first.begin(), first.end());
    for (auto& pt : out) pt.voltage = 0.0;
    for (const auto& c : curves) {
      const auto pts = c.points();
      for (std::size_t k = 0; k < out.size(); ++k) out[k].voltage += pts[k].voltage;
    }
  } else {
    double i_max = 0.0;
    std::vector<double> grid;
    for (const auto& c : curves) {
      i_max = std::max(i_max, c.isc());
      for (const auto& pt : c.points()) grid.push_back(pt.current);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (const double i : grid) {
      if (i > i_max) break;
      double v = 0.0;
      for (const auto& c : curves) v += c.voltage_at(i);
      out.push_back({i, v});
    }
    if (out.size() == 1) out.push_back(out.front());
  }
  return IVCurve(std::move(out));
}

namespace {

IVCurve scaled_branch(const IVCurve& branch, std::size_t count) {
  const double n = static_cast<double>(count);
  std::vector<IVPoint> pts(branch.points().begin(), branch.points().end());
  for (auto& p : pts) p.current *= n;
  return IVCurve(std::move(pts));
}

IVCurve parallel_sampled(std::span<const IVCurve> curves, double v_max) {
  if (!(v_max > 0.0))
    for (const auto& c : curves) v_max = std::max(v_max, c.voc());
  v_max = std::max(v_max, 0.0);

  std::vector<IVPoint> out(kGridPoints);
  for (std::size_t j = 0; j < kGridPoints; ++j) {
    const double v = v_max * static_cast<double>(kGridPoints - 1 - j) / static_cast<double>(kGridPoints - 1);
    double i = 0.0;
    for (const auto& c : curves) i += std::max(0.0, c.current_at(v));
    out[j] = {i, v};
  }
  // Interpolation noise must not break the ordering.
  for (std::size_t j = 1; j < out.size(); ++j) out[j].current = std::max(out[j].current, out[j - 1].current);
  return IVCurve(std::move(out));
}

bool all_same(std::span<const IVCurve> curves) {
  return std::all_of(curves.begin(), curves.end(), [&](const IVCurve& c) { return c.same_samples(curves.front()); });
}

}  // namespace

IVCurve parallel_iv(std::span<const IVCurve> curves, double v_max) {
  if (curves.empty()) throw InputError("parallel composition needs at least one curve");
  if (all_same(curves)) return scaled_branch(curves.front(), curves.size());
  return parallel_sampled(curves, v_max);
}

OperatingPoint find_mpp(const IVCurve& curve) {
  const auto pts = curve.points();
  OperatingPoint best;
  auto consider = [&](double i, double v) {
    const double p = i * v;
    if (p > best.power) best = {v, i, p};
  };
  for (const auto& pt : pts) consider(pt.current, pt.voltage);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const auto& a = pts[k - 1];
    const auto& b = pts[k];
    const double di = b.current - a.current;
    if (!(di > 0.0)) continue;
    const double slope = (b.voltage - a.voltage) / di;
    if (!(slope < 0.0)) continue;
    // P(I) = I·(Va + s·(I − Ia)) peaks at I* = (s·Ia − Va) / (2s).
    const double i_star = (slope * a.current - a.voltage) / (2.0 * slope);
    if (i_star > a.current && i_star < b.current) consider(i_star, a.voltage + slope * (i_star - a.current));
  }
  return best;
}

double effective_shading_factor(double p_shaded_w, double p_unshaded_w) {
  if (!(p_unshaded_w > 0.0)) return 0.0;
  if (p_shaded_w > p_unshaded_w * (1.0 + 1e-9)) {
    std::ostringstream os;
    os.precision(17);
    os << "shaded power " << p_shaded_w << " W exceeds unshaded power " << p_unshaded_w << " W";
    throw NumericError(os.str());
  }
  return std::clamp(1.0 - p_shaded_w / p_unshaded_w, 0.0, 1.0);
}

double geometric_shading_factor(std::span<const double> cell_fractions, const POAIrradiance& poa) {
  const double total = poa.beam + poa.diffuse_sky + poa.ground_reflected;
  if (!(total > 0.0) || cell_fractions.empty()) return 0.0;
  double sum = 0.0;
  for (const double f : cell_fractions) sum += f;
  return std::clamp(sum / static_cast<double>(cell_fractions.size()) * poa.beam / total, 0.0, 1.0);
}

std::vector<IVCurve> array_iv(const ArrayWiring& w, const CellParams& p,
                              std::span<const std::vector<CellCondition>> scenarios) {
  const std::size_t cells = static_cast<std::size_t>(w.modules) * static_cast<std::size_t>(w.cells_per_module);
  if (w.modules_per_string * w.strings_parallel != w.modules)
    throw InputError("wiring: modules_per_string x strings_parallel must equal the module count");

  std::map<CellCondition, int> index;
  std::vector<CellModel> models;
  for (const auto& sc : scenarios) {
    if (sc.size() != cells) throw InputError("scenario size does not match the array");
    for (const auto& c : sc) {
      auto [it, inserted] = index.try_emplace(c, static_cast<int>(models.size()));
      if (inserted) models.emplace_back(p, c);
    }
  }
  std::vector<double> grid = current_grid(models);
  std::vector<std::vector<double>> type_volts;
  type_volts.reserve(models.size());
  for (const auto& m : models) type_volts.push_back(cell_voltages(m, grid));

  auto histogram_of = [&](const std::vector<int>& type_of, int m, const std::vector<int>& sub) {
    Histogram hist;
    for (const int cell : sub) {
      const int t = type_of[static_cast<std::size_t>(m) * w.cells_per_module + cell];
      auto it = std::find_if(hist.begin(), hist.end(), [t](const auto& e) { return e.first == t; });
      if (it == hist.end())
        hist.emplace_back(t, 1);
      else
        ++it->second;
    }
    std::sort(hist.begin(), hist.end());
    return hist;
  };
  std::vector<int> type_of(cells);

  // Put the bypass onset of every distinct substring on the grid, otherwise
  // interpolation cuts the corner where the diode takes over.
  {
    std::set<Histogram> seen;
    for (const auto& sc : scenarios) {
      for (std::size_t c = 0; c < cells; ++c) type_of[c] = index.at(sc[c]);
      for (int m = 0; m < w.modules; ++m)
        for (const auto& sub : w.substrings) seen.insert(histogram_of(type_of, m, sub));
    }
    std::vector<double> kinks;
    const double floor_v = -p.bypass_drop_v;
    for (const auto& hist : seen) {
      auto sum_at = [&](std::size_t g) {
        double v = 0.0;
        for (const auto& [t, n] : hist) v += n * type_volts[static_cast<std::size_t>(t)][g];
        return v;
      };
      auto exact = [&](double i) {
        double v = 0.0;
        for (const auto& [t, n] : hist) v += n * models[static_cast<std::size_t>(t)].voltage_at(i);
        return v;
      };
      std::size_t hi = 0;
      while (hi < grid.size() && sum_at(hi) > floor_v) ++hi;
      if (hi == 0 || hi == grid.size()) continue;
      double a = grid[hi - 1], b = grid[hi];
      for (int it = 0; it < 60 && b - a > 1e-13 * b; ++it) {
        const double mid = 0.5 * (a + b);
        (exact(mid) > floor_v ? a : b) = mid;
      }
      kinks.push_back(0.5 * (a + b));
    }
    if (!kinks.empty()) {
      grid.insert(grid.end(), kinks.begin(), kinks.end());
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
      for (std::size_t t = 0; t < models.size(); ++t) type_volts[t] = cell_voltages(models[t], grid);
    }
  }

  std::map<Histogram, std::vector<double>> substring_cache;
  std::vector<std::vector<std::vector<double>>> strings_per_scenario;
  double v_max = 0.0;
  for (const auto& sc : scenarios) {
    for (std::size_t c = 0; c < cells; ++c) type_of[c] = index.at(sc[c]);
    std::vector<std::vector<double>> strings;
    for (int s = 0; s < w.strings_parallel; ++s) {
      std::vector<double> v(grid.size(), 0.0);
      for (int m = s * w.modules_per_string; m < (s + 1) * w.modules_per_string; ++m) {
        for (const auto& sub : w.substrings) {
          const Histogram hist = histogram_of(type_of, m, sub);
          auto cached = substring_cache.find(hist);
          if (cached == substring_cache.end())
            cached = substring_cache
                         .emplace(hist, substring_voltages(hist, type_volts, grid.size(), p.bypass_drop_v))
                         .first;
          const auto& sv = cached->second;
          for (std::size_t g = 0; g < grid.size(); ++g) v[g] += sv[g];
        }
      }
      v_max = std::max(v_max, v.front());
      strings.push_back(std::move(v));
    }
    strings_per_scenario.push_back(std::move(strings));
  }

  std::vector<std::vector<IVCurve>> branches;
  bool uniform = true;
  for (const auto& strings : strings_per_scenario) {
    std::vector<IVCurve> curves;
    curves.reserve(strings.size());
    for (const auto& v : strings) curves.push_back(make_curve(grid, v));
    uniform = uniform && all_same(curves);
    branches.push_back(std::move(curves));
  }
  // Either every scenario takes the exact scaling path or none does, so all
  // results share one discretisation.
  std::vector<IVCurve> out;
  out.reserve(scenarios.size());
  for (auto& curves : branches) {
    if (uniform)
      out.push_back(scaled_branch(curves.front(), curves.size()));
    else
      out.push_back(parallel_sampled(curves, v_max));
  }
  return out;
}

std::vector<OperatingPoint> array_mpp(const ArrayWiring& w, const CellParams& p,
                                      std::span<const std::vector<CellCondition>> scenarios) {
  std::vector<OperatingPoint> out;
  for (const auto& curve : array_iv(w, p, scenarios)) out.push_back(find_mpp(curve));
  return out;
}

}  // namespace helios
