#include <gtest/gtest.h>

#include <random>

#include "helios/electrical.hpp"
#include "helios/generator.hpp"
#include "helios/error.hpp"
#include "electrical_cases.hpp"
#include "oracles.hpp"

using namespace helios;
using namespace elcases;

TEST(Cell, DarkCellAtShortCircuitCarriesNoCurrent) {
  CellParams p = test_params();
  p.rsh_ohm = 1e12;
  CellModel cell(p, {0.0, 25.0});
  EXPECT_NEAR(cell.current_at(0.0), 0.0, 1e-12);
}

TEST(Cell, StcShortCircuitMatchesBisection) {
  for (const CellParams& p : {test_params(), resistive_params()}) {
    CellModel cell(p, {1000.0, 25.0});
    const double ref = oracle::cell_current(oracle::make_cell(p, {1000.0, 25.0}), 0.0);
    EXPECT_NEAR(cell.current_at(0.0), ref, 1e-9);
    // Series resistance drops the terminal current by about Iph·Rs/Rsh plus a tiny diode term.
    EXPECT_NEAR(cell.current_at(0.0), p.iph_stc_a, 2.0 * p.iph_stc_a * (p.rs_ohm / p.rsh_ohm) + 1e-6);
  }
}

TEST(Cell, OpenCircuitAtVocStc) {
  const CellParams p = test_params();
  CellModel cell(p, {1000.0, 25.0});
  EXPECT_NEAR(cell.current_at(p.voc_stc_v), 0.0, 1e-6);
  EXPECT_NEAR(oracle::cell_current(oracle::make_cell(p, {1000.0, 25.0}), p.voc_stc_v), 0.0, 1e-6);
}

TEST(Cell, VoltageAndCurrentAreInverse) {
  for (const CellParams& p : {test_params(), resistive_params()}) {
    for (double g : {0.0, 50.0, 400.0, 1000.0}) {
      CellModel cell(p, {g, 25.0});
      const auto ref = oracle::make_cell(p, {g, 25.0});
      for (double i : {0.0, 0.5, 2.0, 4.0, 8.0, 8.6}) {
        const double v = cell.voltage_at(i);
        EXPECT_NEAR(v, oracle::cell_voltage(ref, i), 1e-7 * std::max(1.0, std::abs(v))) << "g=" << g << " i=" << i;
        EXPECT_NEAR(cell.current_at(v), i, 1e-7);
      }
    }
  }
}

TEST(Cell, TemperatureRaisesPhotocurrent) {
  CellParams p = test_params();
  EXPECT_NEAR(CellModel(p, {1000.0, 45.0}).photocurrent(), p.iph_stc_a * (1.0 + 20.0 * p.alpha_isc_per_c), 1e-12);
}

TEST(Irradiance, EffectiveIrradianceExamples) {
  EXPECT_DOUBLE_EQ(effective_irradiance(800.0, 100.0, 0.0), 900.0);
  EXPECT_DOUBLE_EQ(effective_irradiance(800.0, 100.0, 1.0), 100.0);
  EXPECT_NEAR(effective_irradiance(900.0, 90.0, 4.0 / 9.0), 590.0, 1e-12);
}

TEST(Curves, SubstringBypassClampsAtDrop) {
  CellParams p = test_params();
  std::vector<CellCondition> cells(18, {1000.0, 25.0});
  cells[3] = {0.0, 25.0};
  for (double drop : {0.0, 0.5}) {
    const IVCurve c = substring_iv(cells, p, drop);
    EXPECT_TRUE(is_monotone(c.points()));
    EXPECT_GE(c.voltage_at(c.isc()), -drop - 1e-12);
    EXPECT_NEAR(c.voltage_at(4.0), -drop, 1e-9);  // the dark cell blocks, the diode conducts
  }
}

TEST(Curves, SeriesOfIdenticalCurvesDoublesVoltage) {
  const CellParams p = test_params();
  std::vector<CellCondition> cells(18, {700.0, 25.0});
  const IVCurve a = substring_iv(cells, p, 0.0);
  const IVCurve s = series_iv(std::vector<IVCurve>{a, a});
  for (double i : {0.0, 1.0, 3.0, 5.5}) EXPECT_NEAR(s.voltage_at(i), 2.0 * a.voltage_at(i), 1e-12);
}

TEST(Curves, ParallelOfIdenticalBranchesDoublesCurrent) {
  const CellParams p = test_params();
  std::vector<CellCondition> cells(4, {600.0, 25.0});
  const IVCurve a = substring_iv(cells, p, 0.0);
  const IVCurve par = parallel_iv(std::vector<IVCurve>{a, a});
  for (double v : {0.0, 0.5, 1.5, 2.2}) EXPECT_NEAR(par.current_at(v), 2.0 * a.current_at(v), 1e-9);
}

TEST(Curves, ComposedNetworksMatchBruteForceSolve) {
  std::mt19937_64 rng(20240611);
  for (const CellParams& p : {test_params(), resistive_params()}) {
    for (int trial = 0; trial < 60; ++trial) {
      const Network net = random_network(rng);
      EXPECT_LE(max_relative_error(net, p), 1e-4)
          << "trial " << trial << " modules " << net.wiring.modules << " parallel " << net.wiring.strings_parallel;
    }
  }
}

TEST(Mpp, HalfShadedModuleAgainstDenseScan) {
  const CellParams p = test_params();
  ArrayWiring w{36, contiguous_substrings(36, 2), 1, 1, 1};
  std::vector<CellCondition> lit(36, {1000.0, 25.0});
  std::vector<CellCondition> half = lit;
  for (int c : w.substrings[1]) half[static_cast<std::size_t>(c)] = {0.0, 25.0};
  const auto mpp = array_mpp(w, p, std::vector<std::vector<CellCondition>>{lit, half});
  const double ratio = mpp[1].power / mpp[0].power;
  EXPECT_GE(ratio, 0.45);
  EXPECT_LE(ratio, 0.55);

  const Network a{w, lit}, b{w, half};
  const double ref_lit = oracle::dense_scan_mpp(chains_of(a, p)[0]);
  const double ref_half = oracle::dense_scan_mpp(chains_of(b, p)[0]);
  EXPECT_NEAR(mpp[0].power, ref_lit, 1e-4 * ref_lit);
  EXPECT_NEAR(mpp[1].power, ref_half, 1e-4 * ref_half);
}

TEST(Mpp, OperatingPointIsConsistent) {
  const CellParams p = test_params();
  std::vector<CellCondition> cells(36, {800.0, 25.0});
  const IVCurve c = substring_iv(cells, p, 0.0);
  const OperatingPoint op = find_mpp(c);
  EXPECT_NEAR(op.power, op.voltage * op.current, 1e-9 * op.power);
  EXPECT_GT(op.power, 0.0);
}

TEST(Mpp, MultiPeakFindsGlobalMaximum) {
  // Two substrings at very different irradiance create two local maxima.
  const CellParams p = test_params();
  ArrayWiring w{36, contiguous_substrings(36, 2), 4, 4, 1};
  std::vector<CellCondition> cells(144, {1000.0, 25.0});
  for (int c = 0; c < 18; ++c) cells[static_cast<std::size_t>(c)] = {250.0, 25.0};
  const auto op = array_mpp(w, p, std::vector<std::vector<CellCondition>>{cells}).front();
  const Network net{w, cells};
  const double ref = oracle::dense_scan_mpp(chains_of(net, p)[0], 20000);
  EXPECT_NEAR(op.power, ref, 2e-4 * ref);
}

TEST(Properties, SupersetShadingNeverIncreasesPower) {
  std::mt19937_64 rng(11);
  const CellParams p = test_params();
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
    for (std::size_t k = 1; k < mpp.size(); ++k) EXPECT_LE(mpp[k].power, mpp[k - 1].power) << trial << "/" << k;
  }
}

TEST(Properties, EffectiveFactorAtLeastGeometric) {
  std::mt19937_64 rng(5);
  const CellParams p = test_params();
  ArrayWiring w{36, contiguous_substrings(36, 2), 4, 4, 1};
  std::uniform_int_distribution<int> cell(0, 4 * 36 - 1), frac(0, 9), count(1, 60);
  std::uniform_real_distribution<double> beam(200.0, 900.0), diffuse(20.0, 200.0);
  for (int trial = 0; trial < 40; ++trial) {
    const POAIrradiance poa{beam(rng), diffuse(rng), 0.0};
    std::vector<double> f(4 * 36, 0.0);
    const int n = count(rng);
    for (int k = 0; k < n; ++k) f[static_cast<std::size_t>(cell(rng))] = frac(rng) / 9.0;
    std::vector<CellCondition> lit(f.size(), {poa.total(), 25.0}), shaded;
    for (double x : f) shaded.push_back({effective_irradiance(poa.beam, poa.diffuse_total(), x), 25.0});
    const auto mpp = array_mpp(w, p, std::vector<std::vector<CellCondition>>{lit, shaded});
    const double eff = effective_shading_factor(mpp[1].power, mpp[0].power);
    EXPECT_GE(eff + 1e-3, geometric_shading_factor(f, poa)) << trial;
  }
}

TEST(Factors, EffectiveFactorRejectsGain) {
  EXPECT_DOUBLE_EQ(effective_shading_factor(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(effective_shading_factor(50.0, 100.0), 0.5);
  EXPECT_THROW(effective_shading_factor(101.0, 100.0), NumericError);
}

TEST(Params, InvalidParametersAreRejected) {
  CellParams p;
  p.n = 2.5;
  EXPECT_THROW(validate(p), InputError);
  p = CellParams{};
  p.rsh_ohm = 0.0;
  EXPECT_THROW(validate(p), InputError);
}
