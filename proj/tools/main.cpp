#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fusereg/commands.hpp"

namespace {

// The config file must load before CLI11 writes flag values, so flags win.
std::string prescan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    const std::string prefix = "--config=";
    if (arg.rfind(prefix, 0) == 0) return arg.substr(prefix.size());
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  fusereg::cli::RunConfig cfg;

  std::string config_path = prescan_config_path(argc, argv);
  try {
    if (!config_path.empty()) fusereg::cli::apply_config_file(cfg, config_path);
  } catch (const fusereg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fusereg::cli::exit_code(e);
  }

  CLI::App app{
      "Linear regression that fuses a sample observing the continuous outcome "
      "with an external sample observing only its dichotomization"};
  app.require_subcommand(1);
  std::string ignored;

  auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--config", ignored, "JSON config file; flags override its values");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--bootstrap-B", cfg.bootstrap_B, "bootstrap replicate count");
    sub->add_option("--threads", cfg.threads, "worker threads (0 keeps the default)");
    sub->add_option("--output-dir", cfg.output_dir, "directory for the CSV output");
    sub->add_option("--model", cfg.model,
                    "error working model: normal, logistic, or mix:w,mu,sigma;...");
  };

  CLI::App* fit = app.add_subcommand("fit", "estimate coefficients from CSV data");
  add_shared(fit);
  fit->add_option("--data", cfg.data_path, "pooled CSV with a source column");
  fit->add_option("--target", cfg.target_path, "target-rows CSV (with --external)");
  fit->add_option("--external", cfg.external_path, "external-rows CSV (with --target)");
  fit->add_option("--source-col", cfg.source_col, "source flag column name");
  fit->add_option("--outcome-col", cfg.outcome_col, "continuous outcome column name");
  fit->add_option("--z-col", cfg.z_col, "dichotomized outcome column name");
  fit->add_option("--covariates", cfg.covariates, "covariate column names")->delimiter(',');
  fit->add_option("--cutoff", cfg.cutoff, "dichotomization cutoff c");
  fit->add_option("--propensity", cfg.propensity, "constant, logistic, or sim2-ratio");
  fit->add_option("--split-n", cfg.split_n,
                  "randomly keep the outcome on this many rows, dichotomize the rest");
  fit->add_option("--split-seed", cfg.split_seed, "seed for the random split");
  fit->add_option("--log", cfg.prep.log_transform, "columns to log-transform")->delimiter(',');
  fit->add_option("--binary", cfg.prep.binary_covariates,
                  "binary columns (exempt from scaling)")
      ->delimiter(',');
  fit->add_flag("--standardize,!--no-standardize", cfg.prep.standardize,
                "center/scale continuous covariates");
  fit->add_option("--sd-threshold", cfg.prep.sd_threshold,
                  "drop rows with any covariate beyond this many sd");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo study of the estimators");
  add_shared(simulate);
  simulate->add_option("--design", cfg.design, "sim1 or sim2");
  simulate->add_option("--scenario", cfg.scenario, "working model scenario: I, II, or III");
  simulate->add_option("--reps", cfg.reps, "Monte Carlo replications");
  simulate->add_option("--n-target", cfg.n_target, "target sample size per replication");
  simulate->add_option("--pi", cfg.pi, "target fraction of the pooled sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fit->parsed()) {
      cfg.command = "fit";
      fusereg::cli::fit_command(cfg, std::cout);
    } else {
      cfg.command = "simulate";
      fusereg::cli::simulate_command(cfg, std::cout);
    }
  } catch (const fusereg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fusereg::cli::exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
