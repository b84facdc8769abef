#include "fusereg/commands.hpp"

#include <algorithm>
#include <cstdio>

#include "fusereg/csv_io.hpp"
#include "fusereg/parallel.hpp"

namespace fusereg::cli {

namespace {

propensity::PropensityStrategy build_strategy(const RunConfig& cfg, const FusedDataset& data) {
  auto strategy = propensity::PropensityStrategy::parse(cfg.propensity);
  if (strategy.kind == propensity::PropensityStrategy::Kind::Sim2Ratio) {
    for (Eigen::Index j = 1; j < data.dim(); ++j) {
      const auto& name = data.covariate_names[static_cast<std::size_t>(j)];
      bool binary = std::find(cfg.prep.binary_covariates.begin(),
                              cfg.prep.binary_covariates.end(),
                              name) != cfg.prep.binary_covariates.end();
      (binary ? strategy.binary_cols : strategy.continuous_cols).push_back(j);
    }
  }
  return strategy;
}

}  // namespace

FitOutput run_fit(const RunConfig& cfg) {
  validate_fit_config(cfg);
  if (cfg.threads > 0) set_threads(cfg.threads);

  ColumnRoles roles;
  roles.source = cfg.source_col;
  roles.outcome = cfg.outcome_col;
  roles.z = cfg.z_col;
  roles.covariates = cfg.covariates;
  roles.cutoff = cfg.cutoff;

  FusedDataset raw;
  if (!cfg.data_path.empty())
    raw = cfg.split_n > 0 ? load_csv_split(cfg.data_path, roles, cfg.split_n, cfg.split_seed)
                          : load_csv(cfg.data_path, roles);
  else
    raw = load_csv_pair(cfg.target_path, cfg.external_path, roles);

  FitOutput out;
  auto prep = preprocess(raw, cfg.prep);
  out.preprocess = std::move(prep.report);
  FusedDataset ds = std::move(prep.data);
  out.coef_names = ds.covariate_names;

  auto model = models::ErrorModel::parse(cfg.model);
  auto strategy = build_strategy(cfg, ds);
  if (ds.external_count() == 0) {
    out.warnings.push_back(
        "no external rows: the efficient-score estimator reduces to weighted "
        "least squares and combining adds nothing");
    strategy = propensity::PropensityStrategy::fixed(propensity::PropensityModel::constant(1.0));
  }

  auto pm = strategy.fit(ds);
  Eigen::VectorXd beta_ls = estimators::wls_fit(ds, model);
  auto eff = estimators::eff_fit(ds, {model, pm, ds.cutoff}, beta_ls);

  auto boot = bootstrap::run_bootstrap(ds, {model, strategy, ds.cutoff},
                                       cfg.bootstrap_B, cfg.seed);
  if (boot.failures > 0)
    out.warnings.push_back(std::to_string(boot.failures) + " of " +
                           std::to_string(boot.requested) +
                           " bootstrap replicates failed and were dropped");

  out.inference = bootstrap::infer(beta_ls, eff.beta, boot);
  out.inference.eff.diagnostics = eff.diagnostics;
  return out;
}

sim::McMetricsTable run_simulate(const RunConfig& cfg) {
  validate_simulate_config(cfg);
  if (cfg.threads > 0) set_threads(cfg.threads);

  sim::DgpSpec spec = cfg.design == "sim1" ? sim::DgpSpec::sim1() : sim::DgpSpec::sim2();
  spec.n_target = cfg.n_target;
  spec.pi = cfg.pi;
  return sim::run_monte_carlo(spec, sim::parse_scenario(cfg.scenario), cfg.reps, cfg.bootstrap_B,
                              cfg.seed);
}

void fit_command(const RunConfig& cfg, std::ostream& out) {
  FitOutput res = run_fit(cfg);
  out << res.preprocess.summary() << '\n';
  for (const auto& w : res.warnings) out << "warning: " << w << '\n';
  if (!res.warnings.empty()) out << '\n';

  std::vector<estimators::FitReport> reports{res.inference.ls, res.inference.eff,
                                             res.inference.combined};
  out << render_fit_tables(reports, res.coef_names);

  char buf[96];
  std::snprintf(buf, sizeof buf,
                "combined ESE, Gram form vs empirical replicates: max relative gap %.3f\n",
                res.inference.combined_ese_gap);
  out << buf;

  write_text_file(cfg.output_dir + "/estimates.csv", estimates_csv(reports, res.coef_names));
}

void simulate_command(const RunConfig& cfg, std::ostream& out) {
  sim::McMetricsTable table = run_simulate(cfg);
  out << render_metrics_table(table);
  write_text_file(cfg.output_dir + "/metrics.csv", metrics_csv(table));
}

int exit_code(const Error& err) {
  switch (err.stage()) {
    case ErrorStage::Config:
      return 2;
    case ErrorStage::Data:
      return 3;
    case ErrorStage::Solver:
      return 4;
  }
  return 1;
}

}  // namespace fusereg::cli
