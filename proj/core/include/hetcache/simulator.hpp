#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hetcache/model.hpp"

namespace hetcache {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Square observation window with wrap-around distances.
struct Region {
  double side = 3000.0;
  double area() const { return side * side; }
  double distance2(const Point& a, const Point& b) const;
};

std::vector<Point> sample_ppp(double density, const Region& region, Rng& rng);

/**
 * Cache placement by the interval method: files are laid end to end on
 * [0, sum q) with file f occupying [c_f, c_f + q_f), and a helper with offset
 * u in [0, 1) stores every file containing one of u, u+1, u+2, ... Each
 * helper then holds at most ceil(sum q) distinct files and holds f with
 * probability exactly q_f.
 */
class IntervalCache {
 public:
  explicit IntervalCache(const CachingPolicy& policy);
  bool holds(double offset, std::size_t f) const;
  std::vector<std::uint32_t> files(double offset) const;
  std::size_t catalog_size() const { return q_.size(); }

 private:
  std::vector<double> start_, q_;
};

/// Independent cache contents for n helpers.
std::vector<std::vector<std::uint32_t>> realize_caches(const CachingPolicy& policy, std::size_t n_helpers, Rng& rng);

inline constexpr std::uint32_t kUnserved = 0xFFFFFFFFu;

struct Link {
  Tier tier = Tier::Macro;
  std::uint32_t station = kUnserved;
};

struct Snapshot {
  Region region;
  std::vector<Point> macros, helpers, users;
  std::vector<double> cache_offset;  ///< one per helper
  std::shared_ptr<const IntervalCache> caches;
  std::vector<std::uint32_t> requests;

  // Filled by associate().
  std::vector<Link> links;
  std::vector<std::uint32_t> macro_load, helper_load;
  std::vector<std::uint8_t> helper_active;

  // Filled by evaluate_links(); indexed like `evaluated`.
  std::vector<std::uint32_t> evaluated;
  std::vector<double> sinr, rate;  ///< rate in bit/s

  bool associated = false;
  std::vector<std::uint32_t> cache_files(std::size_t helper) const;
};

struct SimOptions {
  Region region;
  std::size_t snapshots = 1000;
  std::uint64_t seed = 1;
  /// Users per snapshot whose SINR is evaluated (0 = all). Association and
  /// loads always use every user; subsampling only thins the rate evaluation.
  std::size_t sinr_users = 0;
};

/// Seed of the snapshot stream for a given run seed and snapshot index.
std::uint64_t snapshot_seed(std::uint64_t seed, std::uint64_t index);

/// Stage 1: stations, users, caches and requests.
Snapshot draw_snapshot(const NetworkConfig& cfg, const Catalog& catalog,
                       std::shared_ptr<const IntervalCache> caches, const Region& region, Rng& rng);

/// Stage 2: maximum biased received power among stations that hold the
/// requested file; macro stations hold everything. Also sets loads and
/// active flags.
void associate(Snapshot& snap, const NetworkConfig& cfg);

/// Stage 3: fading, SINR and rates for a subset of users. With a backhaul
/// cap, each helper user's rate is limited to cap / load.
void evaluate_links(Snapshot& snap, const NetworkConfig& cfg, Rng& rng, std::size_t sinr_users,
                    std::optional<double> backhaul_cap = std::nullopt);

Snapshot simulate_snapshot(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy,
                           const SimOptions& opt, std::uint64_t index);
/// Baseline network: helpers reach every file through a capped backhaul. Uses
/// the same random draws as simulate_snapshot for the same index.
Snapshot simulate_traditional(const NetworkConfig& cfg, const Catalog& catalog, const TraditionalConfig& trad,
                              const SimOptions& opt, std::uint64_t index);

/// Line-oriented text dump of a snapshot for debugging.
void write_snapshot(std::ostream& os, const Snapshot& snap);

struct EstimateReport {
  double mean = 0.0;
  double ci_half_width = 0.0;  ///< 95% normal interval from per-snapshot values
  std::size_t samples = 0;
};

/// Sample mean and 95% half-width with compensated summation.
EstimateReport estimate(std::span<const double> per_snapshot);

struct SimulationSummary {
  std::vector<double> rate_targets;
  std::vector<EstimateReport> success;  ///< per rate target
  std::vector<EstimateReport> success_macro, success_helper;
  EstimateReport ase;     ///< nat/s/Hz/m^2
  EstimateReport helper_association;
  EstimateReport helper_active;
  std::size_t snapshots = 0;
};

/// Runs snapshots 0..opt.snapshots-1. Success is tested against every rate
/// target in one pass. With a traditional config the policy is ignored:
/// helpers hold every file and the backhaul cap applies.
SimulationSummary run_simulation(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy,
                                 const SimOptions& opt, std::span<const double> rate_targets,
                                 std::optional<TraditionalConfig> traditional = std::nullopt);

}  // namespace hetcache
