#ifndef FUSEREG_BOOTSTRAP_HPP
#define FUSEREG_BOOTSTRAP_HPP

#include <cstdint>

#include <Eigen/Core>

#include "fusereg/dataset.hpp"
#include "fusereg/estimators.hpp"
#include "fusereg/parallel.hpp"
#include "fusereg/propensity.hpp"
#include "fusereg/rng.hpp"

namespace fusereg::bootstrap {

// Like ScoreContext, but with a refittable propensity: every replicate fits
// its own propensity model under the replicate's weights.
struct CtxSpec {
  models::ErrorModel model;
  propensity::PropensityStrategy strategy;
  double c = 0.0;
};

// i.i.d. Exp(1) multiplier weights.
Eigen::VectorXd exp1_weights(Eigen::Index count, RngStream& stream);

struct FitPair {
  Eigen::VectorXd ls;
  Eigen::VectorXd eff;
};

// One replicate: refit propensity, WLS, and the efficient-score root under a
// common weight vector; the score solve starts from the replicate's own WLS.
FitPair weighted_fit_pair(const FusedDataset& data, const CtxSpec& spec,
                          const Eigen::VectorXd& weights);

struct BootstrapReplicates {
  int requested = 0;
  int failures = 0;  // non-converged replicates, dropped (at most 5%)
  std::uint64_t seed = 0;
  Eigen::MatrixXd ls;   // kept x p, in replicate-index order
  Eigen::MatrixXd eff;  // kept x p, aligned with ls
};

// B replicates, each drawing its weights from an independent substream of
// (seed, replicate index); the result does not depend on the worker count.
BootstrapReplicates run_bootstrap(const FusedDataset& data, const CtxSpec& spec, int B,
                                  std::uint64_t seed, Execution exec = Execution::Parallel);

struct InferenceResult {
  estimators::FitReport ls;
  estimators::FitReport eff;
  estimators::FitReport combined;
  // Combined-estimator spread read directly off the materialized combined
  // replicates; the Gram-form covariance inside `combined` is primary.
  Eigen::VectorXd combined_ese_empirical;
  double combined_ese_gap = 0.0;  // max relative gap between the two ESEs
};

// Empirical covariance blocks across replicates feed estimators::combine;
// every report carries Est / ESE / 95% bounds.
InferenceResult infer(const Eigen::VectorXd& point_ls, const Eigen::VectorXd& point_eff,
                      const BootstrapReplicates& reps);

}  // namespace fusereg::bootstrap

#endif  // FUSEREG_BOOTSTRAP_HPP
