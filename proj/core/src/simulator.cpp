#include "hetcache/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "hetcache/errors.hpp"
#include "interference_kernel.hpp"

namespace hetcache {

double Region::distance2(const Point& a, const Point& b) const {
  double dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  dx = std::min(dx, side - dx);
  dy = std::min(dy, side - dy);
  return dx * dx + dy * dy;
}

std::vector<Point> sample_ppp(double density, const Region& region, Rng& rng) {
  if (!(density >= 0.0) || !std::isfinite(density)) throw InvalidArgument("PPP density must be finite and >= 0");
  if (!(region.side > 0.0)) throw InvalidArgument("region side must be positive");
  std::vector<Point> pts;
  if (density == 0.0) return pts;
  const auto n = std::poisson_distribution<std::size_t>(density * region.area())(rng);
  pts.resize(n);
  std::uniform_real_distribution<double> u(0.0, region.side);
  for (Point& p : pts) {
    p.x = u(rng);
    p.y = u(rng);
  }
  return pts;
}

IntervalCache::IntervalCache(const CachingPolicy& policy) : start_(policy.size()), q_(policy.size()) {
  double acc = 0.0;
  for (std::size_t f = 0; f < policy.size(); ++f) {
    start_[f] = acc;
    q_[f] = policy[f];
    acc += policy[f];
  }
}

bool IntervalCache::holds(double offset, std::size_t f) const {
  const double q = q_[f];
  if (q <= 0.0) return false;
  if (q >= 1.0) return true;
  const double t = start_[f] - offset;
  return std::ceil(t) - t < q;
}

std::vector<std::uint32_t> IntervalCache::files(double offset) const {
  std::vector<std::uint32_t> out;
  for (std::size_t f = 0; f < q_.size(); ++f)
    if (holds(offset, f)) out.push_back(static_cast<std::uint32_t>(f));
  return out;
}

std::vector<std::vector<std::uint32_t>> realize_caches(const CachingPolicy& policy, std::size_t n_helpers, Rng& rng) {
  const IntervalCache layout(policy);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<std::uint32_t>> out(n_helpers);
  for (auto& set : out) set = layout.files(u(rng));
  return out;
}

std::vector<std::uint32_t> Snapshot::cache_files(std::size_t helper) const {
  if (!caches) throw InvalidSnapshot("snapshot has no cache layout");
  return caches->files(cache_offset.at(helper));
}

std::uint64_t snapshot_seed(std::uint64_t seed, std::uint64_t index) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  return splitmix(seed ^ splitmix(index + 0x5851F42D4C957F2Dull));
}

Snapshot draw_snapshot(const NetworkConfig& cfg, const Catalog& catalog, std::shared_ptr<const IntervalCache> caches,
                       const Region& region, Rng& rng) {
  cfg.validate();
  if (!caches || caches->catalog_size() != catalog.size())
    throw InvalidArgument("cache layout does not match the catalog");
  Snapshot s;
  s.region = region;
  s.macros = sample_ppp(cfg.lambda_macro, region, rng);
  s.helpers = sample_ppp(cfg.lambda_helper, region, rng);
  s.users = sample_ppp(cfg.lambda_user, region, rng);
  s.caches = std::move(caches);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  s.cache_offset.resize(s.helpers.size());
  for (double& o : s.cache_offset) o = u(rng);
  s.requests.resize(s.users.size());
  for (auto& r : s.requests) r = static_cast<std::uint32_t>(catalog.request_from_uniform(u(rng)));
  return s;
}

namespace {

// Bucket grid over station positions for radius and nearest queries on the torus.
class StationGrid {
 public:
  StationGrid(const std::vector<Point>& pts, const Region& region, double per_cell)
      : side_(region.side) {
    const double target = std::sqrt(per_cell * region.area() / std::max<std::size_t>(1, pts.size()));
    cells_ = std::clamp(static_cast<int>(side_ / target), 1, 512);
    cell_ = side_ / cells_;
    start_.assign(static_cast<std::size_t>(cells_) * cells_ + 1, 0);
    std::vector<std::uint32_t> cell_of(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of[i] = index(cell_coord(pts[i].x), cell_coord(pts[i].y));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    items_.resize(pts.size());
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i)
      items_[fill[cell_of[i]]++] = {pts[i].x, pts[i].y, static_cast<std::uint32_t>(i)};
  }

  // Calls visit(i, d2) for every station in cells that may lie within radius r of p.
  template <class F>
  void for_each_near(const Point& p, double r, F&& visit) const {
    const int reach = std::isfinite(r) ? static_cast<int>(std::ceil(r / cell_)) : cells_;
    visit_block(p, reach, visit);
  }

  // Nearest station and its squared distance; kUnserved if there are none.
  std::pair<std::uint32_t, double> nearest(const Point& p) const {
    std::uint32_t best = kUnserved;
    double best_d2 = std::numeric_limits<double>::infinity();
    auto visit = [&](std::uint32_t i, double d2) {
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    };
    for (int reach = 1;; ++reach) {
      best = kUnserved;
      best_d2 = std::numeric_limits<double>::infinity();
      const bool all = visit_block(p, reach, visit);
      // Anything outside the searched block is farther than reach cells.
      if (all || best_d2 <= reach * cell_ * reach * cell_) return {best, best_d2};
    }
  }

 private:
  // Visits stations in cells that intersect the disc of radius `reach` cells
  // around p. Returns true when the whole grid was scanned.
  template <class F>
  bool visit_block(const Point& p, int reach, F&& visit) const {
    if (2 * reach + 1 >= cells_) {
      for (const Item& it : items_) visit(it.id, d2(p, it));
      return true;
    }
    const int cx = cell_coord(p.x), cy = cell_coord(p.y);
    const double fx = p.x / cell_ - cx, fy = p.y / cell_ - cy;  // position inside the home cell
    const double r2 = static_cast<double>(reach) * reach;
    for (int dx = -reach; dx <= reach; ++dx) {
      const double gx = dx > 0 ? dx - fx : (dx < 0 ? -dx - 1 + fx : 0.0);
      const int x = (cx + dx + cells_) % cells_;
      for (int dy = -reach; dy <= reach; ++dy) {
        const double gy = dy > 0 ? dy - fy : (dy < 0 ? -dy - 1 + fy : 0.0);
        if (gx * gx + gy * gy > r2) continue;
        const int y = (cy + dy + cells_) % cells_;
        const std::uint32_t c = index(x, y);
        for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) visit(items_[k].id, d2(p, items_[k]));
      }
    }
    return false;
  }

  struct Item {
    double x, y;
    std::uint32_t id;
  };

  double d2(const Point& p, const Item& it) const {
    double dx = std::abs(p.x - it.x), dy = std::abs(p.y - it.y);
    dx = std::min(dx, side_ - dx);
    dy = std::min(dy, side_ - dy);
    return dx * dx + dy * dy;
  }

  int cell_coord(double v) const { return std::clamp(static_cast<int>(v / cell_), 0, cells_ - 1); }
  std::uint32_t index(int x, int y) const { return static_cast<std::uint32_t>(x * cells_ + y); }

  double side_;
  int cells_ = 1;
  double cell_ = 1.0;
  std::vector<std::uint32_t> start_;
  std::vector<Item> items_;
};

}  // namespace

void associate(Snapshot& snap, const NetworkConfig& cfg) {
  if (!snap.caches) throw InvalidSnapshot("snapshot has no cache layout");
  const Region& reg = snap.region;
  const std::size_t n = snap.users.size();
  snap.links.assign(n, Link{});
  snap.macro_load.assign(snap.macros.size(), 0);
  snap.helper_load.assign(snap.helpers.size(), 0);
  snap.helper_active.assign(snap.helpers.size(), 0);

  // Helper wins when P2 B2 r2^-a > P1 B1 r1^-a, i.e. r2^2 < ratio * r1^2.
  const double ratio =
      std::pow(cfg.power_helper * cfg.bias_helper / (cfg.power_macro * cfg.bias_macro), 2.0 / cfg.alpha);
  const bool helpers = ratio > 0.0 && !snap.helpers.empty();
  const StationGrid grid(snap.helpers, reg, 2.0);
  const StationGrid macro_grid(snap.macros, reg, 1.0);

  for (std::size_t u = 0; u < n; ++u) {
    const Point& p = snap.users[u];
    const auto [macro, best_macro] = macro_grid.nearest(p);
    Link link{Tier::Macro, macro};
    if (helpers) {
      double best = ratio * best_macro;
      std::uint32_t helper = kUnserved;
      const std::uint32_t f = snap.requests[u];
      const IntervalCache& caches = *snap.caches;
      grid.for_each_near(p, std::sqrt(best), [&](std::uint32_t h, double d2) {
        if (d2 < best && caches.holds(snap.cache_offset[h], f)) {
          best = d2;
          helper = h;
        }
      });
      if (helper != kUnserved) link = {Tier::Helper, helper};
    }
    snap.links[u] = link;
    if (link.station == kUnserved) continue;
    if (link.tier == Tier::Macro) ++snap.macro_load[link.station];
    else ++snap.helper_load[link.station];
  }
  for (std::size_t h = 0; h < snap.helpers.size(); ++h) snap.helper_active[h] = snap.helper_load[h] > 0;
  snap.associated = true;
}

void evaluate_links(Snapshot& snap, const NetworkConfig& cfg, Rng& rng, std::size_t sinr_users,
                    std::optional<double> backhaul_cap) {
  if (!snap.associated) throw InvalidSnapshot("evaluate_links called before associate");
  const std::size_t n = snap.users.size();
  snap.evaluated.resize(n);
  for (std::size_t i = 0; i < n; ++i) snap.evaluated[i] = static_cast<std::uint32_t>(i);
  if (sinr_users > 0 && sinr_users < n) {
    for (std::size_t i = 0; i < sinr_users; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(snap.evaluated[i], snap.evaluated[pick(rng)]);
    }
    snap.evaluated.resize(sinr_users);
    std::sort(snap.evaluated.begin(), snap.evaluated.end());
  }

  // Active helpers in compact single-precision arrays for the kernel.
  std::vector<float> hx, hy;
  std::vector<std::int64_t> slot(snap.helpers.size(), -1);
  for (std::size_t h = 0; h < snap.helpers.size(); ++h) {
    if (!snap.helper_active[h]) continue;
    slot[h] = static_cast<std::int64_t>(hx.size());
    hx.push_back(static_cast<float>(snap.helpers[h].x));
    hy.push_back(static_cast<float>(snap.helpers[h].y));
  }

  const Region& reg = snap.region;
  const double half_alpha = cfg.alpha / 2.0;
  const int m1 = cfg.antennas_macro;
  const std::uint64_t base = rng();
  std::exponential_distribution<double> exp1(1.0);

  snap.sinr.assign(snap.evaluated.size(), 0.0);
  snap.rate.assign(snap.evaluated.size(), 0.0);
  for (std::size_t e = 0; e < snap.evaluated.size(); ++e) {
    const std::uint32_t u = snap.evaluated[e];
    const Link link = snap.links[u];
    const double h0 = exp1(rng);
    if (link.station == kUnserved) continue;
    const Point& p = snap.users[u];
    const std::uint32_t key = detail::mix32(static_cast<std::uint32_t>(base) ^ detail::mix32(u * 0x632BE59Bu + static_cast<std::uint32_t>(base >> 32)));

    double macro_interf = 0.0;
    for (std::size_t m = 0; m < snap.macros.size(); ++m) {
      if (link.tier == Tier::Macro && m == link.station) continue;
      // Gamma(M, 1/M) as the mean of M unit exponentials.
      double prod = 1.0;
      for (int a = 0; a < m1; ++a) {
        const std::uint32_t h = detail::mix32(key + 0x85EBCA6Bu * static_cast<std::uint32_t>(m * m1 + a + 1));
        prod *= (static_cast<double>(h) + 0.5) / 4294967296.0;
      }
      macro_interf += -std::log(prod) / m1 * std::pow(reg.distance2(p, snap.macros[m]), -half_alpha);
    }

    const auto side = static_cast<float>(reg.side);
    const auto ux = static_cast<float>(p.x), uy = static_cast<float>(p.y);
    const auto ha = static_cast<float>(half_alpha);
    const std::uint32_t hkey = detail::mix32(key ^ 0xC2B2AE35u);
    double helper_interf;
    if (link.tier == Tier::Helper) {
      const auto s = static_cast<std::size_t>(slot[link.station]);
      helper_interf = detail::exp_faded_sum(hx.data(), hy.data(), 0, s, ux, uy, side, ha, hkey) +
                      detail::exp_faded_sum(hx.data(), hy.data(), s + 1, hx.size(), ux, uy, side, ha, hkey);
    } else {
      helper_interf = detail::exp_faded_sum(hx.data(), hy.data(), 0, hx.size(), ux, uy, side, ha, hkey);
    }

    const bool macro = link.tier == Tier::Macro;
    const Point& bs = macro ? snap.macros[link.station] : snap.helpers[link.station];
    const double antennas = macro ? m1 : kHelperAntennas;
    const double signal = (macro ? cfg.power_macro / m1 : cfg.power_helper) * h0 *
                          std::pow(std::max(reg.distance2(p, bs), 1e-6), -half_alpha);
    const double interference = cfg.power_macro * macro_interf + cfg.power_helper * helper_interf;
    const double sinr = signal / (interference + cfg.noise_power);
    const double load = macro ? snap.macro_load[link.station] : snap.helper_load[link.station];
    double rate = cfg.bandwidth * antennas / std::max(load, antennas) * std::log2(1.0 + sinr);
    if (!macro && backhaul_cap) rate = std::min(rate, *backhaul_cap / load);
    snap.sinr[e] = sinr;
    snap.rate[e] = rate;
  }
}

namespace {

Snapshot simulate_with(const NetworkConfig& cfg, const Catalog& catalog, std::shared_ptr<const IntervalCache> caches,
                       const SimOptions& opt, std::uint64_t index, std::optional<double> cap) {
  Rng rng(snapshot_seed(opt.seed, index));
  Snapshot s = draw_snapshot(cfg, catalog, std::move(caches), opt.region, rng);
  associate(s, cfg);
  evaluate_links(s, cfg, rng, opt.sinr_users, cap);
  return s;
}

std::optional<double> cap_of(const TraditionalConfig& trad) {
  if (!(trad.backhaul_capacity >= 0.0)) throw InvalidArgument("backhaul capacity must be >= 0");
  return trad.backhaul_capacity;
}

}  // namespace

Snapshot simulate_snapshot(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy,
                           const SimOptions& opt, std::uint64_t index) {
  if (policy.size() != catalog.size()) throw InvalidArgument("policy length differs from catalog size");
  return simulate_with(cfg, catalog, std::make_shared<const IntervalCache>(policy), opt, index, std::nullopt);
}

Snapshot simulate_traditional(const NetworkConfig& cfg, const Catalog& catalog, const TraditionalConfig& trad,
                              const SimOptions& opt, std::uint64_t index) {
  auto all = std::make_shared<const IntervalCache>(CachingPolicy::everything(catalog.size()));
  return simulate_with(cfg, catalog, std::move(all), opt, index, cap_of(trad));
}

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  os << "region " << snap.region.side << '\n';
  for (std::size_t m = 0; m < snap.macros.size(); ++m)
    os << "macro " << m << ' ' << snap.macros[m].x << ' ' << snap.macros[m].y << ' '
       << (snap.associated ? snap.macro_load[m] : 0) << '\n';
  for (std::size_t h = 0; h < snap.helpers.size(); ++h) {
    os << "helper " << h << ' ' << snap.helpers[h].x << ' ' << snap.helpers[h].y;
    if (snap.associated) os << ' ' << snap.helper_load[h] << ' ' << int(snap.helper_active[h]);
    os << '\n';
  }
  for (std::size_t u = 0; u < snap.users.size(); ++u) {
    os << "user " << u << ' ' << snap.users[u].x << ' ' << snap.users[u].y << ' ' << snap.requests[u];
    if (snap.associated) {
      const Link l = snap.links[u];
      os << ' ' << (l.tier == Tier::Macro ? "macro" : "helper") << ' ';
      if (l.station == kUnserved) os << "none";
      else os << l.station;
    }
    os << '\n';
  }
  for (std::size_t e = 0; e < snap.evaluated.size(); ++e)
    os << "link " << snap.evaluated[e] << ' ' << snap.sinr[e] << ' ' << snap.rate[e] << '\n';
}

}  // namespace hetcache
