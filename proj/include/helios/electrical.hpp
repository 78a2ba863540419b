#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "helios/solar.hpp"

namespace helios {

enum class TemperatureModel { Constant, Noct };

/// Single-diode cell parameters. Defaults describe the reference test cell:
/// ideal bypass diodes, no series resistance and a 1 MΩ shunt.
struct CellParams {
  double iph_stc_a = 8.5;     // photocurrent at 1000 W/m², 25 °C
  double voc_stc_v = 0.62;    // I0 is derived from this at 25 °C
  double n = 1.2;             // ideality factor
  double rs_ohm = 0.0;
  double rsh_ohm = 1e6;
  double alpha_isc_per_c = 0.0005;
  double bypass_drop_v = 0.0;
  double noct_c = 45.0;
  double area_m2 = 0.0243;
  TemperatureModel temperature_model = TemperatureModel::Constant;
};

void validate(const CellParams& p, const std::string& path = "cell_params");

double thermal_voltage(double t_cell_c);

/// I0 such that I(Voc_stc) = 0 at STC, neglecting the shunt leak at Voc.
double saturation_current(const CellParams& p);

/// Constant 25 °C, or T_air + (NOCT − 20)/800 · G_eff.
double cell_temperature(const CellParams& p, double t_air_c, double g_eff_wm2);

/// G_eff = (1 − shaded_fraction)·beam + diffuse. `diffuse` carries sky and
/// ground-reflected components; only the beam is removed by shading.
double effective_irradiance(double beam_wm2, double diffuse_wm2, double shaded_fraction);

struct CellCondition {
  double g_eff_wm2 = 0.0;
  double t_cell_c = 25.0;
  friend auto operator<=>(const CellCondition&, const CellCondition&) = default;
};

/// One cell at a fixed irradiance and temperature. Solves
///   I = Iph − I0·(exp((V + I·Rs)/(n·Vt)) − 1) − (V + I·Rs)/Rsh
/// for either variable; reverse bias uses the same equation.
class CellModel {
 public:
  CellModel(const CellParams& p, CellCondition c);

  /// Newton to |ΔI| < 1e-10 A; NumericError after 100 iterations.
  double current_at(double voltage) const;
  /// Newton on the junction voltage; NumericError after 100 iterations.
  double voltage_at(double current) const;

  double isc() const { return isc_; }
  double voc() const { return voc_; }
  double photocurrent() const { return iph_; }
  const CellCondition& condition() const { return cond_; }

 private:
  CellCondition cond_;
  double iph_;
  double i0_;
  double a_;  // n·Vt
  double rs_;
  double rsh_;
  double isc_ = 0.0;
  double voc_ = 0.0;
};

struct IVPoint {
  double current;
  double voltage;
};

/// Sampled IV characteristic on [0, Isc]: current non-decreasing, voltage
/// non-increasing (tolerance 1e-9 V). Equal currents are allowed (vertical
/// steps) and are ordered by decreasing voltage. Linear between samples.
class IVCurve {
 public:
  /// Throws NumericError unless the points satisfy the invariants.
  explicit IVCurve(std::vector<IVPoint> points);

  std::span<const IVPoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// Clamped to the end voltages outside the current domain.
  double voltage_at(double current) const;
  /// Inverse interpolation; on a flat run (a conducting bypass) returns the
  /// run's smallest current, where bypassing starts.
  double current_at(double voltage) const;

  double isc() const { return points_.back().current; }
  double voc() const { return points_.front().voltage; }

  bool same_samples(const IVCurve& other) const;

 private:
  std::vector<IVPoint> points_;
};

bool is_monotone(std::span<const IVPoint> points, double tol_v = 1e-9);

struct OperatingPoint {
  double voltage = 0.0;
  double current = 0.0;
  double power = 0.0;
};

inline constexpr std::size_t kGridPoints = 512;
inline constexpr std::size_t kKneePointsPerCell = 256;

/// Common current grid for a set of cell states: kGridPoints uniform samples
/// on [0, max Isc], plus, per distinct cell, samples uniform in that cell's
/// voltage (resolving its knee) and geometric offsets just above its Isc
/// (resolving the bypass onset). Curves built on one grid compose exactly.
std::vector<double> current_grid(std::span<const CellModel> cells, std::size_t base_points = kGridPoints);

/// Cells in series protected by one bypass diode: voltages add at equal
/// current, the sum is clamped at −bypass_drop.
IVCurve substring_iv(std::span<const CellCondition> cells, const CellParams& p, double bypass_drop);
IVCurve substring_iv(std::span<const CellCondition> cells, const CellParams& p, double bypass_drop,
                     std::span<const double> grid);

/// Voltages summed at equal current. Curves sharing one current grid are added
/// sample by sample; otherwise on the union of grids by interpolation.
IVCurve series_iv(std::span<const IVCurve> curves);

/// Currents summed at equal voltage on kGridPoints voltages spanning
/// [0, v_max] (v_max <= 0 selects the highest Voc). Currents never go negative,
/// as if each branch had a blocking diode. Identical branches are scaled exactly.
IVCurve parallel_iv(std::span<const IVCurve> curves, double v_max = 0.0);

/// Global maximum of P = V·I over the piecewise-linear curve: each segment's
/// power is a parabola in I and is maximised in closed form, so several local
/// maxima (bypass staircases) are handled. Non-positive power gives {0,0,0}.
OperatingPoint find_mpp(const IVCurve& curve);

/// 1 − P_shaded/P_unshaded (0 when P_unshaded = 0). NumericError when
/// P_shaded exceeds P_unshaded by more than 1e-9 relative.
double effective_shading_factor(double p_shaded_w, double p_unshaded_w);

/// Mean over cells of fraction·beam / (beam + diffuse_sky + ground).
double geometric_shading_factor(std::span<const double> cell_fractions, const POAIrradiance& poa);

/// Electrical hierarchy of one generator.
struct ArrayWiring {
  int cells_per_module = 1;
  std::vector<std::vector<int>> substrings;  // cell indices within a module
  int modules = 1;
  int modules_per_string = 1;
  int strings_parallel = 1;
};

/// Evaluates the array under several cell-condition scenarios (each sized
/// modules × cells_per_module, module-major) on one shared current grid and
/// voltage window, so results are directly comparable: if every cell of
/// scenario B is at most as irradiated as in A, P_mpp(B) <= P_mpp(A).
std::vector<OperatingPoint> array_mpp(const ArrayWiring& wiring, const CellParams& p,
                                      std::span<const std::vector<CellCondition>> scenarios);

/// Same as array_mpp but returns the composed array curves.
std::vector<IVCurve> array_iv(const ArrayWiring& wiring, const CellParams& p,
                              std::span<const std::vector<CellCondition>> scenarios);

}  // namespace helios
