#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "exgeo/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"excursion-set geometry for heavy-tailed shot-noise fields"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  app.add_option("--config", config_path, "flat key=value config file");
  auto* seed_opt =
      app.add_option("--seed", seed, "master seed (overrides the config)");
  auto* workers_opt = app.add_option(
      "--workers", workers, "worker threads (0 = all cores; overrides config)");
  auto* out_opt =
      app.add_option("--out", out_dir, "output directory (overrides config)");

  app.add_subcommand("catalog", "critical-point catalogs of kernel sections");
  app.add_subcommand("simulate", "field realizations and their excursion ECs");
  app.add_subcommand("compare",
                     "conditioned realizations vs the limit law");
  app.add_subcommand("tail", "sup-tail calibration against the scale");
  app.add_subcommand("ec-curve", "limit EC distribution and mean curve");

  CLI11_PARSE(app, argc, argv);

  try {
    exgeo::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = exgeo::parse_config_file(config_path);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (workers_opt->count() > 0) cfg.workers = workers;
    if (out_opt->count() > 0) cfg.out = out_dir;
    exgeo::validate_config(cfg);

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "catalog")
      exgeo::cmd_catalog(cfg, std::cout);
    else if (cmd == "simulate")
      exgeo::cmd_simulate(cfg, std::cout);
    else if (cmd == "compare")
      exgeo::cmd_compare(cfg, std::cout);
    else if (cmd == "tail")
      exgeo::cmd_tail(cfg, std::cout);
    else if (cmd == "ec-curve")
      exgeo::cmd_ec_curve(cfg, std::cout);
    return 0;
  } catch (const exgeo::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const exgeo::BudgetExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
