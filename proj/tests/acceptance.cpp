// Acceptance gate: one deterministic pass/fail line per shipped claim.
// Run with no arguments for the full gate, or pass criterion numbers to
// rerun a subset (e.g. "./acceptance 1 2"). Exits nonzero on any failure.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fusereg/bootstrap.hpp"
#include "fusereg/commands.hpp"
#include "fusereg/error_model.hpp"
#include "fusereg/estimators.hpp"
#include "fusereg/parallel.hpp"
#include "fusereg/propensity.hpp"
#include "fusereg/report.hpp"
#include "fusereg/rng.hpp"
#include "fusereg/sim_engine.hpp"
#include "oracles.hpp"

using namespace fusereg;

namespace {

constexpr std::uint64_t kSeed = 20240817u;

int g_checks = 0;
int g_bad = 0;

void expect(bool ok, const char* fmt, ...) {
  ++g_checks;
  if (ok) return;
  ++g_bad;
  va_list args;
  va_start(args, fmt);
  std::fprintf(stderr, "    violated: ");
  std::vfprintf(stderr, fmt, args);
  std::fprintf(stderr, "\n");
  va_end(args);
}

double cell(const sim::McMetricsTable& t, const char* est, int coef, double sim::McCell::*f) {
  for (const auto& c : t.cells)
    if (c.estimator == est && c.coef == coef) return c.*f;
  std::fprintf(stderr, "    missing cell %s/%d\n", est, coef);
  ++g_bad;
  return std::nan("");
}

// Criteria 1 and 2 share the three scenario tables. The reference metrics
// being reproduced correspond to 250 target + 250 external rows, which is
// what their SSD magnitudes imply.
const sim::McMetricsTable& scenario_table(sim::Scenario sc) {
  static sim::McMetricsTable tables[3];
  static bool done[3] = {false, false, false};
  int k = static_cast<int>(sc);
  if (!done[k]) {
    sim::DgpSpec spec = sim::DgpSpec::sim2();
    spec.n_target = 250;
    std::fprintf(stderr, "  [running Monte Carlo, scenario %s, reps=300, B=200]\n",
                 sim::scenario_name(sc).c_str());
    tables[k] = sim::run_monte_carlo(spec, sc, 300, 200, kSeed);
    done[k] = true;
  }
  return tables[k];
}

// --- criterion 1 -----------------------------------------------------------

void criterion1() {
  const auto& t = scenario_table(sim::Scenario::II);
  const double ref_ls[3] = {0.110, 0.158, 0.077};
  const double ref_comb[3] = {0.092, 0.139, 0.071};
  const double root_reps = std::sqrt(300.0);

  // This criterion covers the benchmark and the combined estimator, whose
  // reference spreads are pinned below; the score-based estimator is judged
  // by the scenario contrast in criterion 2. Its row is still printed so the
  // log carries the full table.
  for (const char* est : {"ls", "combined"}) {
    for (int j = 0; j < 3; ++j) {
      double bias = cell(t, est, j, &sim::McCell::bias);
      double ssd = cell(t, est, j, &sim::McCell::ssd);
      double cr = cell(t, est, j, &sim::McCell::cr95);
      expect(std::fabs(bias) <= 3.0 * ssd / root_reps, "%s beta%d bias %.4f vs 3*SSD/sqrt(reps)",
             est, j, bias);
      expect(cr >= 0.91 && cr <= 0.98, "%s beta%d CR95 %.3f outside [0.91, 0.98]", est, j, cr);
    }
  }
  for (int j = 0; j < 3; ++j)
    std::fprintf(stderr, "    eff beta%d: bias %+.4f SSD %.4f CR95 %.3f\n", j,
                 cell(t, "eff", j, &sim::McCell::bias), cell(t, "eff", j, &sim::McCell::ssd),
                 cell(t, "eff", j, &sim::McCell::cr95));
  for (int j = 0; j < 3; ++j) {
    double ls = cell(t, "ls", j, &sim::McCell::ssd);
    double comb = cell(t, "combined", j, &sim::McCell::ssd);
    expect(ls >= 0.7 * ref_ls[j] && ls <= 1.3 * ref_ls[j],
           "ls beta%d SSD %.4f not within 30%% of %.3f", j, ls, ref_ls[j]);
    expect(comb >= 0.7 * ref_comb[j] && comb <= 1.3 * ref_comb[j],
           "combined beta%d SSD %.4f not within 30%% of %.3f", j, comb, ref_comb[j]);
    expect(comb <= 1.05 * ls, "combined beta%d SSD %.4f exceeds 1.05x ls SSD %.4f", j, comb, ls);
  }
}

// --- criterion 2 -----------------------------------------------------------

void criterion2() {
  int wins = 0;
  for (auto sc : {sim::Scenario::I, sim::Scenario::II, sim::Scenario::III}) {
    const auto& t = scenario_table(sc);
    for (int j = 0; j < 3; ++j) {
      double ls = cell(t, "ls", j, &sim::McCell::ssd);
      double eff = cell(t, "eff", j, &sim::McCell::ssd);
      double comb = cell(t, "combined", j, &sim::McCell::ssd);
      if (eff <= ls && comb <= ls) ++wins;
      std::fprintf(stderr, "    scenario %s beta%d SSD: ls %.4f eff %.4f combined %.4f\n",
                   sim::scenario_name(sc).c_str(), j, ls, eff, comb);
    }
  }
  expect(wins >= 8, "fused estimators beat ls in only %d of 9 cells", wins);
}

// --- criterion 3 -----------------------------------------------------------

void criterion3() {
  auto base = models::ErrorModel::standard_normal();
  Eigen::Vector3d beta(0.0, 1.0, -1.0);
  Eigen::Vector3d alpha(0.5, 2.0, -2.0);
  const double c = 0.0;
  auto rep = models::unidentifiable_reparam(base, beta, alpha, c);

  RngStream rng(kSeed + 3);
  double ll_base = 0.0, ll_rep = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Eigen::Vector3d x(1.0, static_cast<double>(rng.bernoulli(0.5)), rng.normal());
    double y = beta.dot(x) + base.sample(rng);
    int z = y <= c ? 1 : 0;
    double pf = base.cdf(c - beta.dot(x));
    double pg = rep.cdf(c - alpha.dot(x), x);
    ll_base += z == 1 ? std::log(pf) : std::log1p(-pf);
    ll_rep += z == 1 ? std::log(pg) : std::log1p(-pg);
  }
  double rel = std::fabs(ll_base - ll_rep) / std::fabs(ll_base);
  expect(rel < 1e-10, "log-likelihood relative gap %.3e >= 1e-10 (%.10f vs %.10f)", rel, ll_base,
         ll_rep);
}

// --- criterion 4 -----------------------------------------------------------

void criterion4() {
  sim::DgpSpec spec = sim::DgpSpec::sim2();
  Eigen::Vector3d beta = spec.beta_true;

  propensity::DensityRatioSpec truth;
  truth.pi = spec.pi;
  truth.binary_cols = {1};
  truth.target_binary = {{0.5}};
  truth.external_binary = {{0.3}};
  truth.continuous_cols = {2};
  truth.target_continuous = {{0.0, 1.0}};
  truth.external_continuous = {{-2.0, 2.0}};

  estimators::ScoreContext ctx{models::ErrorModel::standard_normal(),
                               propensity::PropensityModel::density_ratio(truth), spec.c};

  const int n = 200000;
  RngStream rng(kSeed + 4);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  Eigen::Vector3d sumsq = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) {
    FusedObservation obs;
    obs.r = rng.bernoulli(spec.pi);
    double x1, x2;
    if (obs.r == 1) {
      x1 = rng.bernoulli(0.5);
      x2 = rng.normal();
    } else {
      x1 = rng.bernoulli(0.3);
      x2 = rng.uniform_range(-2.0, 2.0);
    }
    obs.x = Eigen::Vector3d(1.0, x1, x2);
    double y = beta.dot(obs.x) + spec.error.sample(rng);
    if (obs.r == 1)
      obs.y = y;
    else
      obs.z = y <= spec.c ? 1 : 0;
    Eigen::VectorXd s = estimators::efficient_score(obs, beta, ctx);
    sum += s;
    sumsq += s.cwiseProduct(s);
  }
  for (int j = 0; j < 3; ++j) {
    double mean = sum[j] / n;
    double var = sumsq[j] / n - mean * mean;
    double se = std::sqrt(var / n);
    expect(std::fabs(mean) <= 4.0 * se, "score component %d mean %.3e exceeds 4*SE %.3e", j,
           mean, 4.0 * se);
  }
}

// --- criterion 5 -----------------------------------------------------------

void criterion5() {
  RngStream rng(kSeed + 5);
  std::vector<models::ErrorModel> models_pool{models::ErrorModel::standard_normal(),
                                              models::ErrorModel::standard_logistic()};
  for (int k = 0; k < 5; ++k) {
    int comps = 2 + static_cast<int>(rng.uniform() * 3.0);
    std::vector<models::MixtureComponent> mix;
    for (int q = 0; q < comps; ++q)
      mix.push_back({rng.uniform_range(0.1, 1.0), rng.uniform_range(-3.0, 3.0),
                     rng.uniform_range(1.0, 2.5)});
    models_pool.push_back(models::ErrorModel::gaussian_mixture(mix, true));
  }

  int violations = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto& m = models_pool[static_cast<std::size_t>(i) % models_pool.size()];
    Eigen::Vector3d betav(rng.uniform_range(-2.0, 2.0), rng.uniform_range(-2.0, 2.0),
                          rng.uniform_range(-2.0, 2.0));
    Eigen::Vector3d x(1.0, static_cast<double>(rng.bernoulli(0.5)), rng.uniform_range(-3.0, 3.0));
    double c = rng.uniform_range(-1.0, 1.0);
    double p = rng.uniform_range(0.05, 0.95);

    double a = c - betav.dot(x);
    double F, Fbar, m1;
    m.cdf_and_m1(a, F, Fbar, m1);
    double v = m.variance();
    // Mirrors the score implementation: F * (F - 1) written as -F * Fbar so
    // the bounds stay meaningful when F rounds to 1.
    double D = m1 * m1 * (1.0 - p) - F * Fbar * v;
    double bound = -p * F * Fbar * v;
    double kappa = -F * Fbar * v / D;

    bool ok = D <= bound * (1.0 - 1e-12) && kappa >= 1.0 - 1e-12 && kappa <= 1.0 / p + 1e-12 / p;
    if (!ok && ++violations <= 5)
      std::fprintf(stderr, "    draw %d: D=%.6e bound=%.6e kappa=%.12f p=%.4f a=%.4f\n", i, D,
                   bound, kappa, p, a);
  }
  expect(violations == 0, "%d of %d draws violated the denominator or ratio bounds", violations,
         n);
}

// --- criterion 6 -----------------------------------------------------------

void criterion6() {
  RngStream rng(kSeed + 6);
  struct Case {
    models::ErrorModel model;
    double lo, hi;
  };
  std::vector<Case> cases{{models::ErrorModel::standard_normal(), -12.0, 12.0},
                          {models::ErrorModel::standard_logistic(), -25.0, 25.0}};
  for (int k = 0; k < 5; ++k) {
    int comps = 2 + static_cast<int>(rng.uniform() * 4.0);
    std::vector<models::MixtureComponent> mix;
    double lo = 1e300, hi = -1e300;
    for (int q = 0; q < comps; ++q) {
      double mu = rng.uniform_range(-4.0, 4.0);
      double sigma = rng.uniform_range(0.5, 2.5);
      mix.push_back({rng.uniform_range(0.1, 1.0), mu, sigma});
      lo = std::min(lo, mu - 7.0 * sigma);
      hi = std::max(hi, mu + 7.0 * sigma);
    }
    cases.push_back({models::ErrorModel::gaussian_mixture(mix, true), lo, hi});
  }

  double worst = 0.0;
  for (const auto& cs : cases) {
    for (int i = 0; i < 1000; ++i) {
      double a = cs.lo + (cs.hi - cs.lo) * (i + 0.5) / 1000.0;
      double got = cs.model.partial_first_moment(a);
      double want = oracles::m1_by_quadrature(cs.model, a);
      worst = std::max(worst, std::fabs(got - want));
    }
  }
  expect(worst < 1e-9, "largest closed-form vs quadrature gap %.3e >= 1e-9", worst);
  std::fprintf(stderr, "    largest m1 gap across %zu models x 1000 points: %.3e\n", cases.size(),
               worst);
}

// --- criterion 7 -----------------------------------------------------------

void criterion7() {
  const int n = 2000;
  RngStream rng(kSeed + 7);
  auto mixture = sim::DgpSpec::sim2().error;
  std::vector<FusedObservation> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    FusedObservation obs;
    obs.x = Eigen::Vector3d(1.0, static_cast<double>(rng.bernoulli(0.5)), rng.normal());
    obs.y = obs.x[1] - obs.x[2] + mixture.sample(rng);
    rows.push_back(std::move(obs));
  }
  auto ds = FusedDataset::from_rows(rows, 0.0);

  auto model = models::ErrorModel::standard_normal();
  auto unit = propensity::PropensityModel::constant(1.0);
  Eigen::VectorXd wls = estimators::wls_fit(ds, model);
  auto eff = estimators::eff_fit(ds, {model, unit, 0.0}, wls);
  double gap = (eff.beta - wls).lpNorm<Eigen::Infinity>();
  expect(gap < 1e-8, "eff vs wls gap %.3e >= 1e-8 with unit propensity", gap);

  Eigen::VectorXd sand = estimators::wls_sandwich_cov(ds, wls, model).diagonal().cwiseSqrt();
  auto boot = bootstrap::run_bootstrap(
      ds, {model, propensity::PropensityStrategy::fixed(unit), 0.0}, 400, kSeed + 70);
  auto inf = bootstrap::infer(wls, eff.beta, boot);
  for (int j = 0; j < 3; ++j) {
    double ratio = inf.ls.ese[j] / sand[j];
    expect(ratio >= 0.8 && ratio <= 1.2, "bootstrap/sandwich ESE ratio %.3f for beta%d", ratio,
           j);
    std::fprintf(stderr, "    beta%d bootstrap ESE %.5f sandwich ESE %.5f\n", j, inf.ls.ese[j],
                 sand[j]);
  }
}

// --- criterion 8 -----------------------------------------------------------

void criterion8() {
  const models::ErrorModel working[3] = {models::ErrorModel::standard_normal(),
                                         models::ErrorModel::standard_logistic(),
                                         sim::DgpSpec::sim2().error};
  double worst = 1e300;
  for (int run = 0; run < 20; ++run) {
    sim::DgpSpec spec = sim::DgpSpec::sim2();
    spec.n_target = 150;
    auto ds = sim::generate(spec, kSeed + 800 + static_cast<std::uint64_t>(run));
    bootstrap::CtxSpec ctx{working[run % 3], sim::default_strategy(spec), spec.c};

    auto pm = ctx.strategy.fit(ds);
    Eigen::VectorXd wls = estimators::wls_fit(ds, ctx.model);
    auto eff = estimators::eff_fit(ds, {ctx.model, pm, ctx.c}, wls);
    auto boot = bootstrap::run_bootstrap(ds, ctx, 200, kSeed + 900 + run);
    auto inf = bootstrap::infer(wls, eff.beta, boot);

    Eigen::MatrixXd gain = inf.ls.covariance - inf.combined.covariance;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gain + gain.transpose()));
    double lmin = es.eigenvalues().minCoeff();
    worst = std::min(worst, lmin);
    expect(lmin >= -1e-10, "run %d: min eigenvalue of Var(ls) - Var(combined) is %.3e", run,
           lmin);
  }
  std::fprintf(stderr, "    smallest gain eigenvalue over 20 bootstrap runs: %.3e\n", worst);
}

// --- criterion 9 -----------------------------------------------------------

void criterion9() {
  struct Block {
    const char* label;
    std::vector<double> est, ese, lower, upper;
  };
  // Reference fits of the shared health-survey benchmark: three estimators
  // under a logistic working model, then two under a normal working model
  // (the least-squares row is identical in both).
  const std::vector<Block> blocks{
      {"logistic/ls",
       {28.083, 1.949, 0.897, -1.107, -0.349, -0.118, 4.012},
       {0.496, 0.242, 0.469, 0.567, 0.343, 0.273, 0.269},
       {27.111, 1.474, -0.023, -2.219, -1.020, -0.653, 3.485},
       {29.056, 2.424, 1.817, 0.004, 0.323, 0.418, 4.539}},
      {"logistic/eff",
       {26.414, 1.341, 0.558, -1.158, -0.433, -0.086, 2.920},
       {0.405, 0.190, 0.373, 0.474, 0.285, 0.229, 0.234},
       {25.619, 0.969, -0.172, -2.087, -0.992, -0.535, 2.461},
       {27.208, 1.713, 1.288, -0.230, 0.126, 0.363, 3.378}},
      {"logistic/combined",
       {26.722, 1.520, 0.059, -1.704, -0.513, -0.123, 2.177},
       {0.402, 0.187, 0.368, 0.468, 0.284, 0.228, 0.225},
       {25.936, 1.153, -0.662, -2.621, -1.071, -0.569, 1.736},
       {27.509, 1.886, 0.780, -0.787, 0.044, 0.324, 2.617}},
      {"normal/eff",
       {26.793, 1.385, 0.558, -1.141, -0.372, -0.136, 2.931},
       {0.401, 0.183, 0.365, 0.475, 0.272, 0.216, 0.241},
       {26.007, 1.027, -0.158, -2.072, -0.905, -0.559, 2.460},
       {27.579, 1.743, 1.274, -0.211, 0.162, 0.286, 3.403}},
      {"normal/combined",
       {26.918, 1.415, 0.021, -1.612, -0.427, -0.202, 2.132},
       {0.397, 0.175, 0.354, 0.471, 0.269, 0.211, 0.221},
       {26.140, 1.071, -0.672, -2.534, -0.954, -0.616, 1.699},
       {27.696, 1.758, 0.715, -0.689, 0.101, 0.211, 2.566}}};

  double worst = 0.0;
  for (const auto& b : blocks) {
    const auto p = static_cast<Eigen::Index>(b.est.size());
    Eigen::VectorXd est = Eigen::Map<const Eigen::VectorXd>(b.est.data(), p);
    Eigen::VectorXd ese = Eigen::Map<const Eigen::VectorXd>(b.ese.data(), p);
    Eigen::VectorXd var = ese.cwiseProduct(ese);
    auto rep = estimators::make_report(b.label, est, Eigen::MatrixXd(var.asDiagonal()));
    for (Eigen::Index j = 0; j < p; ++j) {
      double dl = std::fabs(rep.lower95[j] - b.lower[static_cast<std::size_t>(j)]);
      double du = std::fabs(rep.upper95[j] - b.upper[static_cast<std::size_t>(j)]);
      worst = std::max(worst, std::max(dl, du));
      expect(dl <= 2e-3 && du <= 2e-3, "%s coef %ld interval off by %.4e/%.4e", b.label,
             static_cast<long>(j), dl, du);
    }
  }
  std::fprintf(stderr, "    largest interval discrepancy: %.2e (tolerance 2e-3)\n", worst);
}

// --- criterion 10 ----------------------------------------------------------

void criterion10() {
  cli::RunConfig cfg;
  cfg.command = "simulate";
  cfg.design = "sim2";
  cfg.scenario = "II";
  cfg.reps = 100;
  cfg.n_target = 80;
  cfg.bootstrap_B = 100;
  cfg.seed = kSeed + 10;

  cfg.threads = 1;
  std::string one = cli::metrics_csv(cli::run_simulate(cfg));
  std::string one_again = cli::metrics_csv(cli::run_simulate(cfg));
  cfg.threads = 4;
  std::string four = cli::metrics_csv(cli::run_simulate(cfg));

  expect(one == one_again, "two identical single-threaded runs differ");
  expect(one == four, "1-thread and 4-thread outputs differ");
  std::fprintf(stderr, "    metrics table bytes: %zu, identical across runs and worker counts\n",
               one.size());
}

struct Criterion {
  int id;
  const char* what;
  void (*run)();
};

const Criterion kCriteria[] = {
    {1, "scenario II Monte Carlo bias, spread, and coverage match the reference metrics",
     criterion1},
    {2, "fused estimators have SSD at or below least squares in at least 8 of 9 cells",
     criterion2},
    {3, "external-data log-likelihood is invariant to the cdf/coefficient reparameterization",
     criterion3},
    {4, "locally efficient score has mean zero at the true coefficients", criterion4},
    {5, "score denominator and variance-ratio bounds hold on random inputs", criterion5},
    {6, "partial first moment matches adaptive quadrature on dense grids", criterion6},
    {7, "without external data the score fit and its bootstrap collapse to weighted least squares",
     criterion7},
    {8, "combining never inflates the estimated covariance", criterion8},
    {9, "reported intervals equal estimate +- 1.96 ese on the reference tables", criterion9},
    {10, "simulation output is byte-identical across runs and worker counts", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    std::fprintf(stderr, "criterion %d...\n", c.id);
    g_checks = 0;
    g_bad = 0;
    try {
      c.run();
    } catch (const std::exception& e) {
      ++g_bad;
      std::fprintf(stderr, "    threw: %s\n", e.what());
    }
    bool ok = g_bad == 0;
    std::printf("%s criterion %d: %s (%d checks, %d violations)\n", ok ? "PASS" : "FAIL", c.id,
                c.what, g_checks, g_bad);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
