#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "helios/electrical.hpp"
#include "helios/generator.hpp"
#include "oracles.hpp"

// Random small cell networks and their brute-force comparison.
namespace elcases {

using namespace helios;

inline CellParams test_params() { return CellParams{}; }

inline CellParams resistive_params() {
  CellParams p;
  p.rs_ohm = 0.004;
  p.rsh_ohm = 80.0;
  p.bypass_drop_v = 0.4;
  return p;
}

struct Network {
  ArrayWiring wiring;
  std::vector<CellCondition> cells;  // module-major
};

inline std::vector<oracle::Chain> chains_of(const Network& net, const CellParams& p) {
  std::vector<oracle::Chain> out;
  const auto& w = net.wiring;
  for (int s = 0; s < w.strings_parallel; ++s) {
    oracle::Chain ch;
    ch.bypass_drop = p.bypass_drop_v;
    for (int m = s * w.modules_per_string; m < (s + 1) * w.modules_per_string; ++m) {
      for (const auto& sub : w.substrings) {
        std::vector<oracle::Cell> g;
        for (int c : sub) g.push_back(oracle::make_cell(p, net.cells[static_cast<std::size_t>(m * w.cells_per_module + c)]));
        ch.groups.push_back(std::move(g));
      }
    }
    out.push_back(std::move(ch));
  }
  return out;
}

inline Network random_network(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> total_cells(2, 6);
  std::uniform_real_distribution<double> g(0.0, 1000.0);
  std::uniform_int_distribution<int> coin(0, 1);
  for (;;) {
    const int n = total_cells(rng);
    std::vector<int> divisors;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) divisors.push_back(d);
    const int modules = divisors[std::uniform_int_distribution<std::size_t>(0, divisors.size() - 1)(rng)];
    const int cpm = n / modules;
    const int groups = std::uniform_int_distribution<int>(1, cpm)(rng);
    Network net;
    net.wiring.cells_per_module = cpm;
    net.wiring.substrings = contiguous_substrings(cpm, groups);
    net.wiring.modules = modules;
    const bool parallel = modules > 1 && coin(rng);
    net.wiring.strings_parallel = parallel ? modules : 1;
    net.wiring.modules_per_string = parallel ? 1 : modules;
    if (parallel && modules == 4 && coin(rng)) {
      net.wiring.strings_parallel = 2;
      net.wiring.modules_per_string = 2;
    }
    for (int k = 0; k < n; ++k) net.cells.push_back({coin(rng) ? 1000.0 : g(rng), 25.0});
    return net;
  }
}

inline double max_relative_error(const Network& net, const CellParams& p) {
  std::vector<std::vector<CellCondition>> scen{net.cells};
  const IVCurve curve = array_iv(net.wiring, p, scen).front();
  const auto chains = chains_of(net, p);
  double worst = 0.0;
  if (net.wiring.strings_parallel == 1) {
    const double full = std::max(1e-12, std::abs(chains[0].voltage(0.0)));
    for (const auto& pt : curve.points()) {
      const double ref = chains[0].voltage(pt.current);
      worst = std::max(worst, std::abs(pt.voltage - ref) / std::max(std::abs(ref), full));
    }
  } else {
    double full = 0.0;
    for (const auto& ch : chains) full += ch.isc_max();
    for (const auto& pt : curve.points()) {
      if (pt.voltage < 0.0) continue;
      const double ref = oracle::network_current(chains, pt.voltage);
      double miss = std::abs(pt.current - ref);
      if (pt.voltage == 0.0) {
        // With an ideal bypass a string at exactly 0 V carries any current
        // from its bypass onset up, so only the interval is checked there.
        const double below = oracle::network_current(chains, 1e-12);
        miss = std::max({0.0, below - pt.current, pt.current - ref});
      }
      worst = std::max(worst, miss / std::max(std::abs(ref), full));
    }
  }
  return worst;
}

}  // namespace elcases
