#include "fusereg/bootstrap.hpp"

#include <cmath>
#include <vector>

namespace fusereg::bootstrap {

Eigen::VectorXd exp1_weights(Eigen::Index count, RngStream& stream) {
  if (count < 1) throw config_error("weight count must be at least 1");
  Eigen::VectorXd w(count);
  for (Eigen::Index i = 0; i < count; ++i) w[i] = stream.exponential();
  return w;
}

FitPair weighted_fit_pair(const FusedDataset& data, const CtxSpec& spec,
                          const Eigen::VectorXd& weights) {
  if (weights.size() != data.size())
    throw data_error("weight vector length differs from dataset size");
  propensity::PropensityModel pm = spec.strategy.fit(data, &weights);
  Eigen::VectorXd beta_ls = estimators::wls_fit(data, spec.model, &weights);
  estimators::ScoreContext ctx{spec.model, pm, spec.c};
  auto eff = estimators::eff_fit(data, ctx, beta_ls, &weights);
  return {std::move(beta_ls), std::move(eff.beta)};
}

BootstrapReplicates run_bootstrap(const FusedDataset& data, const CtxSpec& spec, int B,
                                  std::uint64_t seed, Execution exec) {
  if (B < 100) throw config_error("bootstrap needs at least 100 replicates");
  const Eigen::Index p = data.dim();

  Eigen::MatrixXd ls(B, p), eff(B, p);
  std::vector<char> ok(static_cast<std::size_t>(B), 0);

  for_each_index(static_cast<std::size_t>(B), exec, [&](std::size_t b) {
    RngStream stream = RngStream::substream(seed, b);
    try {
      Eigen::VectorXd w = exp1_weights(data.size(), stream);
      FitPair pair = weighted_fit_pair(data, spec, w);
      ls.row(static_cast<Eigen::Index>(b)) = pair.ls.transpose();
      eff.row(static_cast<Eigen::Index>(b)) = pair.eff.transpose();
      ok[b] = 1;
    } catch (const Error&) {
      ok[b] = 0;
    }
  });

  int kept = 0;
  for (char flag : ok) kept += flag;
  BootstrapReplicates out;
  out.requested = B;
  out.failures = B - kept;
  out.seed = seed;
  if (out.failures > 0.05 * B)
    throw solver_error("bootstrap: " + std::to_string(out.failures) + " of " + std::to_string(B) +
                       " replicates failed to converge");

  out.ls.resize(kept, p);
  out.eff.resize(kept, p);
  Eigen::Index at = 0;
  for (int b = 0; b < B; ++b) {
    if (!ok[static_cast<std::size_t>(b)]) continue;
    out.ls.row(at) = ls.row(b);
    out.eff.row(at) = eff.row(b);
    ++at;
  }
  return out;
}

namespace {

Eigen::MatrixXd cross_cov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const Eigen::Index k = A.rows();
  Eigen::MatrixXd Ac = A.rowwise() - A.colwise().mean();
  Eigen::MatrixXd Bc = B.rowwise() - B.colwise().mean();
  return Ac.transpose() * Bc / static_cast<double>(k - 1);
}

}  // namespace

InferenceResult infer(const Eigen::VectorXd& point_ls, const Eigen::VectorXd& point_eff,
                      const BootstrapReplicates& reps) {
  const Eigen::Index k = reps.ls.rows();
  if (k < 2) throw solver_error("inference needs at least two bootstrap replicates");

  Eigen::MatrixXd d = reps.eff - reps.ls;
  Eigen::MatrixXd var_ls = cross_cov(reps.ls, reps.ls);
  Eigen::MatrixXd var_eff = cross_cov(reps.eff, reps.eff);
  Eigen::MatrixXd var_d = cross_cov(d, d);
  Eigen::MatrixXd cov_ls_d = cross_cov(reps.ls, d);

  auto comb = estimators::combine(point_ls, point_eff, var_ls, var_d, cov_ls_d);

  InferenceResult out;
  out.ls = estimators::make_report("ls", point_ls, var_ls);
  out.eff = estimators::make_report("eff", point_eff, var_eff);
  out.combined = estimators::make_report("combined", comb.beta, comb.covariance);
  out.combined.W = comb.W;

  Eigen::MatrixXd combined_reps = reps.ls + d * comb.W.transpose();
  Eigen::MatrixXd var_c_emp = cross_cov(combined_reps, combined_reps);
  out.combined_ese_empirical = var_c_emp.diagonal().cwiseMax(0.0).cwiseSqrt();

  double gap = 0.0;
  for (Eigen::Index j = 0; j < point_ls.size(); ++j) {
    double denom = std::max(out.combined.ese[j], 1e-300);
    gap = std::max(gap, std::fabs(out.combined_ese_empirical[j] - out.combined.ese[j]) / denom);
  }
  out.combined_ese_gap = gap;
  return out;
}

}  // namespace fusereg::bootstrap
