#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace testsupport {

struct LatticeResult {
  std::vector<double> q;
  double value = -1.0;
};

/// Exhaustive search of sum_f w_f q_f / (c1 + c2 q_f) over a lattice of five
/// coordinates with sum(q) <= budget. Coordinate f ranges over
/// lo[f], lo[f] + step, ..., hi[f]. The objective increases in every q_f, so
/// for each choice of the first four coordinates the fifth is taken as the
/// largest feasible lattice value.
inline LatticeResult lattice_search5(std::span<const double> w, double c1, double c2, double budget, double step,
                                     const std::array<double, 5>& lo, const std::array<double, 5>& hi) {
  std::array<std::vector<double>, 5> vals, gain;
  for (int f = 0; f < 5; ++f) {
    const long n = std::lround((hi[f] - lo[f]) / step);
    for (long i = 0; i <= n; ++i) {
      const double q = std::min(1.0, lo[f] + i * step);
      vals[f].push_back(q);
      gain[f].push_back(w[f] * q / (c1 + c2 * q));
    }
  }
  LatticeResult best;
  best.q.assign(5, 0.0);
  const auto& v4 = vals[4];
  for (std::size_t a = 0; a < vals[0].size(); ++a) {
    const double sa = vals[0][a];
    if (sa > budget + 1e-12) break;
    for (std::size_t b = 0; b < vals[1].size(); ++b) {
      const double sb = sa + vals[1][b];
      if (sb > budget + 1e-12) break;
      for (std::size_t c = 0; c < vals[2].size(); ++c) {
        const double sc = sb + vals[2][c];
        if (sc > budget + 1e-12) break;
        const double gabc = gain[0][a] + gain[1][b] + gain[2][c];
        for (std::size_t d = 0; d < vals[3].size(); ++d) {
          const double sd = sc + vals[3][d];
          if (sd > budget + 1e-12) break;
          const double room = budget - sd;
          if (room < v4.front() - 1e-12) break;
          std::size_t e = std::min<std::size_t>(v4.size() - 1, static_cast<std::size_t>(
                                                                   std::floor((room - v4.front()) / step + 1e-9)));
          const double value = gabc + gain[3][d] + gain[4][e];
          if (value > best.value) {
            best.value = value;
            best.q = {vals[0][a], vals[1][b], vals[2][c], vals[3][d], v4[e]};
          }
        }
      }
    }
  }
  return best;
}

/// Full 0.01 lattice, then two local refinements at 1e-3 and 1e-4 around the
/// incumbent.
inline LatticeResult refined_lattice_search5(std::span<const double> w, double c1, double c2, double budget) {
  std::array<double, 5> lo{}, hi{};
  hi.fill(1.0);
  LatticeResult r = lattice_search5(w, c1, c2, budget, 0.01, lo, hi);
  for (double step : {1e-3, 1e-4}) {
    for (int f = 0; f < 5; ++f) {
      lo[f] = std::max(0.0, r.q[f] - 10 * step);
      hi[f] = std::min(1.0, r.q[f] + 10 * step);
    }
    r = lattice_search5(w, c1, c2, budget, step, lo, hi);
  }
  return r;
}

}  // namespace testsupport
