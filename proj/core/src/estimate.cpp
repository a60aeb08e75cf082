#include <cmath>
#include <limits>
#include <numbers>

#include "hetcache/errors.hpp"
#include "hetcache/simulator.hpp"

namespace hetcache {

namespace {

// Neumaier compensated sum.
class Sum {
 public:
  void add(double x) {
    const double t = s_ + x;
    c_ += std::abs(s_) >= std::abs(x) ? (s_ - t) + x : (x - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

}  // namespace

EstimateReport estimate(std::span<const double> per_snapshot) {
  EstimateReport r;
  r.samples = per_snapshot.size();
  if (r.samples == 0) {
    r.mean = r.ci_half_width = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  Sum s;
  for (double v : per_snapshot) s.add(v);
  r.mean = s.value() / static_cast<double>(r.samples);
  if (r.samples < 2) {
    r.ci_half_width = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  Sum ss;
  for (double v : per_snapshot) ss.add((v - r.mean) * (v - r.mean));
  const double var = ss.value() / static_cast<double>(r.samples - 1);
  r.ci_half_width = 1.959963984540054 * std::sqrt(var / static_cast<double>(r.samples));
  return r;
}

SimulationSummary run_simulation(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy,
                                 const SimOptions& opt, std::span<const double> rate_targets,
                                 std::optional<TraditionalConfig> traditional) {
  if (policy.size() != catalog.size()) throw InvalidArgument("policy length differs from catalog size");
  if (opt.snapshots == 0) throw InvalidArgument("simulation needs at least one snapshot");
  const std::size_t nt = rate_targets.size();
  std::shared_ptr<const IntervalCache> caches =
      std::make_shared<const IntervalCache>(traditional ? CachingPolicy::everything(catalog.size()) : policy);
  std::optional<double> cap;
  if (traditional) {
    if (!(traditional->backhaul_capacity >= 0.0)) throw InvalidArgument("backhaul capacity must be >= 0");
    cap = traditional->backhaul_capacity;
  }

  std::vector<std::vector<double>> succ(nt), succ_m(nt), succ_h(nt);
  std::vector<double> ase, share, active;
  const double ase_scale = std::numbers::ln2 / (opt.region.area() * cfg.bandwidth);

  for (std::size_t i = 0; i < opt.snapshots; ++i) {
    Rng rng(snapshot_seed(opt.seed, i));
    Snapshot s = draw_snapshot(cfg, catalog, caches, opt.region, rng);
    associate(s, cfg);
    evaluate_links(s, cfg, rng, opt.sinr_users, cap);

    const std::size_t n = s.users.size();
    if (!s.helpers.empty()) {
      std::size_t on = 0;
      for (auto a : s.helper_active) on += a;
      active.push_back(static_cast<double>(on) / s.helpers.size());
    }
    if (n == 0) {
      ase.push_back(0.0);
      continue;
    }
    std::size_t helper_users = 0;
    for (const Link& l : s.links) helper_users += l.tier == Tier::Helper && l.station != kUnserved;
    share.push_back(static_cast<double>(helper_users) / n);

    const std::size_t ne = s.evaluated.size();
    double bits = 0.0;
    for (double r : s.rate) bits += r;
    ase.push_back(bits * static_cast<double>(n) / ne * ase_scale);
    for (std::size_t t = 0; t < nt; ++t) {
      std::size_t hit_m = 0, hit_h = 0;
      for (std::size_t e = 0; e < ne; ++e) {
        if (s.rate[e] < rate_targets[t]) continue;
        (s.links[s.evaluated[e]].tier == Tier::Macro ? hit_m : hit_h)++;
      }
      succ[t].push_back(static_cast<double>(hit_m + hit_h) / ne);
      succ_m[t].push_back(static_cast<double>(hit_m) / ne);
      succ_h[t].push_back(static_cast<double>(hit_h) / ne);
    }
  }

  SimulationSummary out;
  out.rate_targets.assign(rate_targets.begin(), rate_targets.end());
  for (std::size_t t = 0; t < nt; ++t) {
    out.success.push_back(estimate(succ[t]));
    out.success_macro.push_back(estimate(succ_m[t]));
    out.success_helper.push_back(estimate(succ_h[t]));
  }
  out.ase = estimate(ase);
  out.helper_association = estimate(share);
  out.helper_active = estimate(active);
  out.snapshots = opt.snapshots;
  return out;
}

}  // namespace hetcache
