#include "fusereg/sim_engine.hpp"

#include <cmath>

namespace fusereg::sim {

Scenario parse_scenario(const std::string& text) {
  if (text == "I" || text == "i" || text == "1") return Scenario::I;
  if (text == "II" || text == "ii" || text == "2") return Scenario::II;
  if (text == "III" || text == "iii" || text == "3") return Scenario::III;
  throw config_error("unknown scenario '" + text + "'; expected I, II, or III");
}

std::string scenario_name(Scenario sc) {
  switch (sc) {
    case Scenario::I:
      return "I";
    case Scenario::II:
      return "II";
    case Scenario::III:
      return "III";
  }
  return "?";
}

DgpSpec DgpSpec::sim1() {
  DgpSpec s;
  s.which = SimDesign::Sim1;
  s.beta_true = Eigen::Vector3d(0.0, 1.0, -1.0);
  s.error = models::ErrorModel::gaussian_mixture({{0.8, 8.0, 2.0}, {0.2, -2.0, 1.0}}, true);
  return s;
}

DgpSpec DgpSpec::sim2() {
  DgpSpec s;
  s.which = SimDesign::Sim2;
  s.beta_true = Eigen::Vector3d(0.0, 1.0, -1.0);
  s.error = models::ErrorModel::gaussian_mixture({{0.9, 0.2, 1.1}, {0.1, -1.8, 1.0}}, false);
  return s;
}

FusedDataset generate(const DgpSpec& spec, std::uint64_t seed) {
  if (!(spec.pi > 0.0) || !(spec.pi < 1.0)) throw config_error("pi must lie in (0, 1)");
  if (spec.n_target < 1) throw config_error("n_target must be positive");
  if (spec.beta_true.size() != 3) throw config_error("beta_true must have length 3");

  const auto n_total = static_cast<Eigen::Index>(std::llround(spec.n_target / spec.pi));
  const Eigen::Index n_ext = n_total - spec.n_target;
  if (n_ext < 1) throw config_error("pi leaves no external rows");

  RngStream rng(seed);
  std::vector<FusedObservation> rows;
  rows.reserve(static_cast<std::size_t>(n_total));

  auto draw = [&](bool target) {
    FusedObservation obs;
    double x1, x2;
    if (spec.which == SimDesign::Sim1 || target) {
      x1 = rng.bernoulli(0.5);
      x2 = rng.normal();
    } else {
      x1 = rng.bernoulli(0.3);
      x2 = rng.uniform_range(-2.0, 2.0);
    }
    obs.x = Eigen::Vector3d(1.0, x1, x2);
    double yval = spec.beta_true.dot(obs.x) + spec.error.sample(rng);
    if (target) {
      obs.r = 1;
      obs.y = yval;
    } else {
      obs.r = 0;
      obs.z = yval <= spec.c ? 1 : 0;
    }
    rows.push_back(std::move(obs));
  };

  for (int i = 0; i < spec.n_target; ++i) draw(true);
  for (Eigen::Index i = 0; i < n_ext; ++i) draw(false);
  return FusedDataset::from_rows(rows, spec.c);
}

models::ErrorModel working_model(const DgpSpec& spec, Scenario sc) {
  switch (sc) {
    case Scenario::I:
      return spec.error;
    case Scenario::II:
      return models::ErrorModel::standard_normal();
    case Scenario::III:
      return models::ErrorModel::standard_logistic();
  }
  return spec.error;
}

propensity::PropensityStrategy default_strategy(const DgpSpec& spec) {
  if (spec.which == SimDesign::Sim1) return propensity::PropensityStrategy::constant();
  return propensity::PropensityStrategy::sim2_ratio({1}, {2});
}

McMetricsTable run_monte_carlo(const DgpSpec& spec, Scenario sc, int reps, int B,
                               std::uint64_t seed, Execution exec, bool wls_only) {
  if (reps < 100) throw config_error("Monte Carlo needs at least 100 replications");
  const Eigen::Index p = spec.beta_true.size();
  const auto sc_id = static_cast<std::uint64_t>(sc) + 1;
  const auto strategy = default_strategy(spec);
  const auto model = working_model(spec, sc);

  const int n_est = wls_only ? 1 : 3;
  // Slot layout: one row per replication, estimators side by side.
  Eigen::MatrixXd est(reps, n_est * p), ese(reps, n_est * p), cover(reps, n_est * p);
  Eigen::VectorXd z1(reps);
  std::vector<char> ok(static_cast<std::size_t>(reps), 0);

  for_each_index(static_cast<std::size_t>(reps), exec, [&](std::size_t rep) {
    const auto row = static_cast<Eigen::Index>(rep);
    try {
      FusedDataset ds = generate(spec, mix64(seed, sc_id, rep, 11));
      auto put = [&](int slot, const Eigen::VectorXd& beta, const Eigen::VectorXd& se,
                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
        for (Eigen::Index j = 0; j < p; ++j) {
          est(row, slot * p + j) = beta[j];
          ese(row, slot * p + j) = se[j];
          double truth = spec.beta_true[j];
          cover(row, slot * p + j) = (lo[j] <= truth && truth <= hi[j]) ? 1.0 : 0.0;
        }
      };

      if (wls_only) {
        Eigen::VectorXd beta = estimators::wls_fit(ds, model);
        auto rep_ls = estimators::make_report("ls", beta, estimators::wls_sandwich_cov(ds, beta, model));
        put(0, rep_ls.beta, rep_ls.ese, rep_ls.lower95, rep_ls.upper95);
      } else {
        auto pm = strategy.fit(ds);
        Eigen::VectorXd beta_ls = estimators::wls_fit(ds, model);
        auto eff = estimators::eff_fit(ds, {model, pm, spec.c}, beta_ls);
        auto boot = bootstrap::run_bootstrap(ds, {model, strategy, spec.c}, B,
                                             mix64(seed, sc_id, rep, 13), Execution::Serial);
        auto inf = bootstrap::infer(beta_ls, eff.beta, boot);
        put(0, inf.ls.beta, inf.ls.ese, inf.ls.lower95, inf.ls.upper95);
        put(1, inf.eff.beta, inf.eff.ese, inf.eff.lower95, inf.eff.upper95);
        put(2, inf.combined.beta, inf.combined.ese, inf.combined.lower95, inf.combined.upper95);
      }

      double ext = 0.0, ext_z1 = 0.0;
      for (Eigen::Index i = 0; i < ds.size(); ++i) {
        if (ds.r[i] != 0) continue;
        ext += 1.0;
        ext_z1 += ds.z[i];
      }
      z1[row] = ext > 0.0 ? ext_z1 / ext : 0.0;
      ok[rep] = 1;
    } catch (const Error&) {
      ok[rep] = 0;
    }
  });

  McMetricsTable table;
  table.which = spec.which;
  table.scenario = sc;
  table.reps = reps;
  table.bootstrap_B = wls_only ? 0 : B;
  table.seed = seed;
  table.sim1_caveat = spec.which == SimDesign::Sim1;

  int good = 0;
  for (char flag : ok) good += flag;
  table.failed_reps = reps - good;
  if (table.failed_reps > 0.02 * reps)
    throw solver_error("Monte Carlo: " + std::to_string(table.failed_reps) + " of " +
                       std::to_string(reps) + " replications failed");

  const char* names[] = {"ls", "eff", "combined"};
  for (int slot = 0; slot < n_est; ++slot) {
    for (Eigen::Index j = 0; j < p; ++j) {
      double sum = 0.0, sum_ese = 0.0, sum_cov = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        if (!ok[static_cast<std::size_t>(rep)]) continue;
        sum += est(rep, slot * p + j);
        sum_ese += ese(rep, slot * p + j);
        sum_cov += cover(rep, slot * p + j);
      }
      double mean = sum / good;
      double ssq = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        if (!ok[static_cast<std::size_t>(rep)]) continue;
        double dlt = est(rep, slot * p + j) - mean;
        ssq += dlt * dlt;
      }
      McCell cell;
      cell.estimator = names[slot];
      cell.coef = static_cast<int>(j);
      cell.bias = mean - spec.beta_true[j];
      cell.ssd = good > 1 ? std::sqrt(ssq / (good - 1)) : 0.0;
      cell.ese = sum_ese / good;
      cell.cr95 = sum_cov / good;
      table.cells.push_back(std::move(cell));
    }
  }

  double z1_sum = 0.0;
  for (int rep = 0; rep < reps; ++rep)
    if (ok[static_cast<std::size_t>(rep)]) z1_sum += z1[rep];
  table.external_z1_rate = z1_sum / good;
  return table;
}

}  // namespace fusereg::sim
