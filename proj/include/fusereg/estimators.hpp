#ifndef FUSEREG_ESTIMATORS_HPP
#define FUSEREG_ESTIMATORS_HPP

#include <functional>
#include <string>

#include <Eigen/Core>

#include "fusereg/dataset.hpp"
#include "fusereg/error_model.hpp"
#include "fusereg/propensity.hpp"

namespace fusereg::estimators {

// Everything the efficient score needs besides the data: the working error
// shape, the propensity evaluator, and the dichotomization cutoff.
struct ScoreContext {
  models::ErrorModel model;
  propensity::PropensityModel prop;
  double c = 0.0;
};

struct SolverDiagnostics {
  int iterations = 0;
  double score_norm = 0.0;
  int dampings = 0;
};

struct FitReport {
  std::string name;
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd ese;
  Eigen::VectorXd lower95;
  Eigen::VectorXd upper95;
  Eigen::MatrixXd W;  // combined estimator only; 0x0 otherwise
  SolverDiagnostics diagnostics;
};

// Fills ese and the 95% interval (beta +- 1.96 ese) from the covariance.
FitReport make_report(std::string name, const Eigen::VectorXd& beta, const Eigen::MatrixXd& cov);

// Weighted least squares on the target rows: solves
// sum w_i v^{-1} x_i x_i' beta = sum w_i v^{-1} x_i y_i. With the x-free
// working models v is constant, so the result does not depend on the model.
Eigen::VectorXd wls_fit(const FusedDataset& data, const models::ErrorModel& model,
                        const Eigen::VectorXd* weights = nullptr);

// Sandwich covariance A^{-1} B A^{-T} / n of the unweighted WLS fit.
Eigen::MatrixXd wls_sandwich_cov(const FusedDataset& data, const Eigen::VectorXd& beta,
                                 const models::ErrorModel& model);

// The locally efficient score for one observation. Single-ratio form:
//   [ r e (F-1) F + (p - r)(F - z) m ] x / D,  D = m^2 (1-p) + F (F-1) v,
// with a = c - beta'x, F = cdf(a), m = m1(a), e = y - beta'x (target rows
// only; y is never read on external rows).
Eigen::VectorXd efficient_score(const FusedObservation& obs, const Eigen::VectorXd& beta,
                                const ScoreContext& ctx);

// Weighted mean of the score over all rows, with the per-row propensity
// precomputed once (it does not depend on beta). This is the function whose
// root eff_fit hunts.
Eigen::VectorXd mean_score(const FusedDataset& data, const Eigen::VectorXd& beta,
                           const models::ErrorModel& model, const Eigen::VectorXd& pvec, double c,
                           const Eigen::VectorXd* weights = nullptr);

using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Generic mean-zero element r(y - beta'x) c_fn(x) + (r - p(x))(z - F(c - beta'x)) b_fn(x);
// test utility for checking score structure against arbitrary (c_fn, b_fn).
Eigen::VectorXd lambda_perp_element(const FusedObservation& obs, const Eigen::VectorXd& beta,
                                    const ScoreContext& ctx, const VectorFn& c_fn,
                                    const VectorFn& b_fn);

struct EffFitResult {
  Eigen::VectorXd beta;
  SolverDiagnostics diagnostics;
};

// Roots the mean score by damped Newton: numeric Jacobian via central
// differences (step 1e-6 max(1, |beta_j|)), step halving up to 30 times when
// the max-norm of the score fails to decrease, at most 100 iterations,
// converged when the norm drops below 1e-8.
EffFitResult eff_fit(const FusedDataset& data, const ScoreContext& ctx,
                     const Eigen::VectorXd& init, const Eigen::VectorXd* weights = nullptr);
EffFitResult eff_fit(const FusedDataset& data, const ScoreContext& ctx);

struct CombineResult {
  Eigen::VectorXd beta;
  Eigen::MatrixXd W;
  Eigen::MatrixXd covariance;
};

// beta_combined = beta_ls + W (beta_eff - beta_ls) with
// W = -cov_ls_d (cov_d + lambda I)^{-1}; the ridge lambda = 1e-8 tr(cov_d)/p
// kicks in only when cov_d's condition number exceeds 1e10. The combined
// covariance cov_ls - cov_ls_d (cov_d + lambda I)^{-1} cov_ls_d' subtracts a
// Gram form, so it never exceeds cov_ls.
CombineResult combine(const Eigen::VectorXd& beta_ls, const Eigen::VectorXd& beta_eff,
                      const Eigen::MatrixXd& cov_ls, const Eigen::MatrixXd& cov_d,
                      const Eigen::MatrixXd& cov_ls_d);

}  // namespace fusereg::estimators

#endif  // FUSEREG_ESTIMATORS_HPP
