#include <iostream>

#include "CLI11.hpp"
#include "wcsb/errors.hpp"
#include "wcsb/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCheck = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-coupling stochastic Burgers laboratory"};
  app.set_version_flag("--version", std::string(WCSB_VERSION));
  std::string kind, config_path, out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool check = false;
  app.add_option("kind", kind, "Experiment kind")->required()->check(CLI::IsMember(wcsb::experiment_kinds()));
  app.add_option("--config", config_path, "Configuration file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides run.seed)");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--check", check, "Exit with status 4 when an acceptance threshold is violated");
  app.add_option("--out", out_dir, "Output directory (overrides WCSBURGERS_OUT and run.out)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  wcsb::RunOptions opt;
  opt.out_dir = out_dir;
  if (seed_opt->count()) opt.seed = seed;
  opt.jobs = jobs;
  opt.check = check;
  try {
    const wcsb::Config config = wcsb::Config::parse_file(config_path);
    const wcsb::ResultRecord r = wcsb::run_experiment(kind, config, opt);
    std::cout << kind << ": wrote " << r.files.size() + 1 << " files to " << r.out_dir << " in " << r.wall_seconds
              << " s\n";
    for (const auto& f : r.failures) std::cout << "  check: " << f << "\n";
    if (check && !r.passed()) return kExitCheck;
    return 0;
  } catch (const wcsb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const wcsb::NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
