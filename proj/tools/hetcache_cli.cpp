#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hetcache/errors.hpp"
#include "hetcache/harness.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumeric = 2, kIo = 3 };

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> snapshots;
  std::string out;
  unsigned threads = 1;
  bool quiet = false;
};

int emit(const hetcache::ResultTable& table, const std::string& path) {
  for (const std::string& w : table.warnings) std::cerr << "warning: " << w << "\n";
  if (path.empty() || path == "-") {
    hetcache::write_csv(table, std::cout);
  } else {
    hetcache::emit_csv(table, path);
    std::cerr << "wrote " << table.rows.size() << " rows to " << path << "\n";
  }
  return table.any_failed() ? kNumeric : kOk;
}

int run(const std::string& spec_path, const Common& c, bool optimize_only) {
  hetcache::ExperimentSpec spec = hetcache::load_experiment(spec_path);
  if (optimize_only) {
    spec.metrics = {hetcache::Metric::CacheProbability};
    spec.methods = {hetcache::Method::Analytic};
    std::erase_if(spec.policies, [](const hetcache::PolicySpec& p) {
      return p.kind == hetcache::PolicyKind::Traditional;
    });
    spec.validate();
  }
  hetcache::RunOptions opt;
  opt.threads = c.threads;
  opt.seed = c.seed;
  opt.snapshots = c.snapshots;
  if (!c.quiet) opt.progress = &std::cerr;
  const hetcache::ResultTable table = hetcache::run_experiment(spec, opt);
  return emit(table, c.out.empty() ? spec.output : c.out);
}

int validate() {
  int failed = 0;
  for (const hetcache::ValidationCheck& v : hetcache::run_validation()) {
    std::printf("%s  %s (%s)\n", v.passed ? "PASS" : "FAIL", v.name.c_str(), v.detail.c_str());
    failed += v.passed ? 0 : 1;
  }
  return failed ? kNumeric : kOk;
}

int tradeoff(double target, std::size_t cache_size, bool per_disk, const std::string& spec_path) {
  hetcache::ExperimentSpec base =
      spec_path.empty() ? hetcache::named_experiment("fig8") : hetcache::load_experiment(spec_path);
  const hetcache::NetworkConfig& cfg = base.network;
  const hetcache::Catalog catalog(base.n_files, std::min(cache_size, base.n_files), base.zipf_skew);
  const double unit = per_disk ? hetcache::per_disk(1.0, 250.0) : 1.0;
  const double lambda = hetcache::tradeoff_solve(target * unit, cache_size, cfg, catalog);
  std::printf("helper_density_m2,helper_over_macro\n%.17g,%.17g\n", lambda, lambda / cfg.lambda_macro);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-enabled two-tier network analysis, optimization and simulation"};
  app.require_subcommand(1);
  Common c;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Simulation seed (overrides the spec)");
    sub->add_option("--snapshots", c.snapshots, "Snapshots per simulation cell (overrides the spec)");
    sub->add_option("--out", c.out, "CSV output path; '-' for stdout");
    sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", c.quiet, "No progress lines");
  };

  std::string spec_path;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment spec and write its CSV table");
  run_cmd->add_option("spec", spec_path, "Experiment JSON file")->required();
  add_common(run_cmd);

  CLI::App* opt_cmd = app.add_subcommand("optimize", "Write the caching probabilities each policy resolves to");
  opt_cmd->add_option("spec", spec_path, "Experiment JSON file")->required();
  add_common(opt_cmd);

  CLI::App* val_cmd = app.add_subcommand("validate", "Run the numerical self-checks");

  double target = 0.0;
  std::size_t cache_size = 0;
  bool per_disk = false;
  std::string base_spec;
  CLI::App* trade_cmd = app.add_subcommand("tradeoff", "Helper density reaching a target ASE with Popular caching");
  trade_cmd->add_option("--target", target, "Target ASE in nat/s/Hz/m^2")->required();
  trade_cmd->add_option("--cache-size", cache_size, "Files per helper")->required()->check(CLI::PositiveNumber);
  trade_cmd->add_flag("--per-disk", per_disk, "Read the target in units of 1/(pi 250^2) m^-2");
  trade_cmd->add_option("--spec", base_spec, "Experiment JSON providing the network (default: fig8)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(spec_path, c, false);
    if (*opt_cmd) return run(spec_path, c, true);
    if (*val_cmd) return validate();
    if (*trade_cmd) return tradeoff(target, cache_size, per_disk, base_spec);
  } catch (const hetcache::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const hetcache::InfeasibleTarget& e) {
    std::cerr << "infeasible target: " << e.what() << "\n";
    return kConfig;
  } catch (const hetcache::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kConfig;
  } catch (const hetcache::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const hetcache::NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
  return kOk;
}
