#include <algorithm>
#include <cmath>
#include <numeric>

#include "hetcache/errors.hpp"
#include "hetcache/optimizers.hpp"

namespace hetcache {

namespace {

double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

double filled(std::span<const double> root, double s, double offset) {
  double total = 0.0;
  for (double r : root) total += clip01(s * r - offset);
  return total;
}

}  // namespace

SolverReport waterfill(const WaterfillSpec& spec) {
  const std::size_t n = spec.weights.size();
  if (n == 0) throw InvalidArgument("water-filling needs at least one weight");
  if (!(spec.gain > 0.0) || !std::isfinite(spec.gain)) throw InvalidArgument("water-filling gain must be positive");
  if (!(spec.offset >= 0.0) || !std::isfinite(spec.offset))
    throw InvalidArgument("water-filling offset must be finite and >= 0");
  if (!(spec.budget >= 0.0) || !std::isfinite(spec.budget)) throw InvalidArgument("budget must be >= 0");

  std::vector<double> root(n);
  double min_root = std::numeric_limits<double>::infinity();
  std::size_t positive = 0;
  for (std::size_t f = 0; f < n; ++f) {
    const double w = spec.weights[f];
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("water-filling weights must be >= 0");
    root[f] = std::sqrt(w);
    if (w > 0.0) {
      ++positive;
      min_root = std::min(min_root, root[f]);
    }
  }

  SolverReport rep;
  std::vector<double> q(n, 0.0);
  const double o = spec.offset;

  if (static_cast<double>(positive) <= spec.budget) {
    for (std::size_t f = 0; f < n; ++f) q[f] = root[f] > 0.0 ? 1.0 : 0.0;
    rep.multiplier = 0.0;
    rep.converged = true;
  } else if (spec.budget == 0.0) {
    rep.multiplier = std::numeric_limits<double>::infinity();
    rep.converged = true;
  } else {
    // sum_f clip(s sqrt(w_f) - o) is continuous and non-decreasing in s.
    double lo = 0.0, hi = (1.0 + o) / min_root;
    int it = 0;
    for (; it < 300 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (filled(root, mid, o) < spec.budget ? lo : hi) = mid;
    }
    double s = hi;
    // Solve exactly on the active set found by bisection.
    std::size_t full = 0, interior = 0;
    double interior_root = 0.0;
    for (double r : root) {
      const double v = s * r - o;
      if (v >= 1.0) ++full;
      else if (v > 0.0) {
        ++interior;
        interior_root += r;
      }
    }
    if (interior > 0) {
      const double exact = (spec.budget - static_cast<double>(full) + static_cast<double>(interior) * o) / interior_root;
      std::size_t full2 = 0, interior2 = 0;
      for (double r : root) {
        const double v = exact * r - o;
        if (v >= 1.0) ++full2;
        else if (v > 0.0) ++interior2;
      }
      if (full2 == full && interior2 == interior) s = exact;
    }
    for (std::size_t f = 0; f < n; ++f) q[f] = clip01(s * root[f] - o);
    rep.iterations = it;
    rep.multiplier = spec.gain / (s * s);
    const double total = std::accumulate(q.begin(), q.end(), 0.0);
    rep.converged = std::abs(total - spec.budget) <= 1e-9 * std::max(1.0, spec.budget);
  }

  double obj = 0.0;
  for (std::size_t f = 0; f < n; ++f)
    if (q[f] > 0.0) obj += spec.weights[f] * q[f] / (o + q[f]);
  rep.objective = obj;
  rep.policy = CachingPolicy(std::move(q), spec.budget);
  return rep;
}

double waterfill_kkt_residual(const WaterfillSpec& spec, std::span<const double> q, double multiplier) {
  if (multiplier == 0.0) return 0.0;
  const double level = multiplier / spec.gain;
  double worst = 0.0;
  for (std::size_t f = 0; f < q.size(); ++f) {
    const double w = spec.weights[f];
    if (w == 0.0) continue;
    const double marginal = w / ((spec.offset + q[f]) * (spec.offset + q[f]));
    double viol = 0.0;
    if (q[f] <= 0.0) viol = std::max(0.0, marginal - level);
    else if (q[f] >= 1.0) viol = std::max(0.0, level - marginal);
    else viol = std::abs(marginal - level);
    worst = std::max(worst, viol / level);
  }
  return worst;
}

std::vector<double> projection_capped_simplex(std::span<const double> q, double budget) {
  if (!(budget >= 0.0)) throw InvalidArgument("budget must be >= 0");
  std::vector<double> out(q.size());
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!std::isfinite(q[i])) throw InvalidArgument("cannot project a non-finite point");
    out[i] = clip01(q[i]);
    total += out[i];
  }
  if (total <= budget) return out;
  // Find tau > 0 with sum clip(q - tau) = budget; the map is piecewise linear.
  double lo = 0.0, hi = *std::max_element(q.begin(), q.end());
  auto mass = [&](double tau) {
    double s = 0.0;
    for (double v : q) s += clip01(v - tau);
    return s;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > budget ? lo : hi) = mid;
  }
  // Exact solve on the segment that contains the root.
  const double tau0 = 0.5 * (lo + hi);
  double fixed = 0.0, free_sum = 0.0;
  std::size_t free_count = 0;
  for (double v : q) {
    const double t = v - tau0;
    if (t >= 1.0) fixed += 1.0;
    else if (t > 0.0) {
      free_sum += v;
      ++free_count;
    }
  }
  double tau = tau0;
  if (free_count > 0) {
    const double exact = (free_sum + fixed - budget) / static_cast<double>(free_count);
    if (exact >= lo - 1e-12 && exact <= hi + 1e-12) tau = exact;
  }
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = clip01(q[i] - tau);
  return out;
}

}  // namespace hetcache
