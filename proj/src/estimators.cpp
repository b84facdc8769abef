#include "fusereg/estimators.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

namespace fusereg::estimators {

namespace {

// Scalar part of the score: the p-vector is factor * x.
double score_factor(const models::ErrorModel& model, double v, double a, int r, double eps, int z,
                    double p) {
  double F, Fbar, m1;
  model.cdf_and_m1(a, F, Fbar, m1);
  // F - 1 is written as -Fbar throughout: once F rounds to 1 the product
  // F * (F - 1) evaluates to zero and the denominator degenerates to the
  // m1^2 rounding residue, flipping its sign.
  double D = m1 * m1 * (1.0 - p) - F * Fbar * v;
  if (std::fabs(D) < 1e-300)
    throw solver_error("efficient score denominator vanished (saturated cdf)");
  double num = (p - r) * (z == 1 ? -Fbar : F) * m1;
  if (r == 1) num -= eps * Fbar * F;
  return num / D;
}

void check_spd_condition(const Eigen::MatrixXd& M, double limit, const char* what,
                         ErrorStage stage) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  double smin = svd.singularValues()(M.cols() - 1);
  double smax = svd.singularValues()(0);
  if (!(smin > 0.0) || smax / smin > limit)
    throw Error(stage, std::string(what) + " is singular or ill-conditioned");
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::string out = "[";
  char buf[64];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", v[i]);
    out += buf;
  }
  return out + "]";
}

}  // namespace

FitReport make_report(std::string name, const Eigen::VectorXd& beta, const Eigen::MatrixXd& cov) {
  FitReport rep;
  rep.name = std::move(name);
  rep.beta = beta;
  rep.covariance = 0.5 * (cov + cov.transpose());
  rep.ese = rep.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  rep.lower95 = beta - 1.96 * rep.ese;
  rep.upper95 = beta + 1.96 * rep.ese;
  return rep;
}

Eigen::VectorXd wls_fit(const FusedDataset& data, const models::ErrorModel& model,
                        const Eigen::VectorXd* weights) {
  const Eigen::Index p = data.dim();
  const double vinv = 1.0 / model.variance();

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  Eigen::Index used = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.r[i] != 1) continue;
    double w = (weights ? (*weights)[i] : 1.0) * vinv;
    M.noalias() += w * data.X.row(i).transpose() * data.X.row(i);
    b.noalias() += (w * data.y[i]) * data.X.row(i).transpose();
    ++used;
  }
  if (used < p)
    throw data_error("weighted least squares needs at least " + std::to_string(p) +
                     " target rows, got " + std::to_string(used));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smin = svd.singularValues()(p - 1);
  double smax = svd.singularValues()(0);
  if (!(smin > 0.0) || smax / smin > 1e12)
    throw data_error("weighted least squares normal matrix is singular or ill-conditioned");
  return svd.solve(b);
}

Eigen::MatrixXd wls_sandwich_cov(const FusedDataset& data, const Eigen::VectorXd& beta,
                                 const models::ErrorModel& model) {
  const Eigen::Index p = data.dim();
  const double vinv = 1.0 / model.variance();

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);  // -A0, positive definite
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(p, p);
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.r[i] != 1) continue;
    double eps = data.y[i] - beta.dot(data.X.row(i).transpose());
    Eigen::MatrixXd xx = data.X.row(i).transpose() * data.X.row(i);
    A.noalias() += vinv * xx;
    B.noalias() += vinv * vinv * eps * eps * xx;
    ++n;
  }
  if (n == 0) throw data_error("sandwich covariance needs target rows");
  A /= static_cast<double>(n);
  B /= static_cast<double>(n);

  check_spd_condition(A, 1e12, "sandwich bread matrix", ErrorStage::Data);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  Eigen::MatrixXd AinvB = ldlt.solve(B);
  Eigen::MatrixXd cov = ldlt.solve(AinvB.transpose()).transpose() / static_cast<double>(n);
  return 0.5 * (cov + cov.transpose());
}

Eigen::VectorXd efficient_score(const FusedObservation& obs, const Eigen::VectorXd& beta,
                                const ScoreContext& ctx) {
  if (obs.r == 0 && obs.z != 0 && obs.z != 1)
    throw data_error("external observation lacks a dichotomized outcome");
  double a = ctx.c - beta.dot(obs.x);
  double p = ctx.prop.evaluate(obs.x);
  int z = obs.r == 1 ? (obs.y <= ctx.c ? 1 : 0) : obs.z;
  double eps = obs.r == 1 ? obs.y - beta.dot(obs.x) : 0.0;
  double factor = score_factor(ctx.model, ctx.model.variance(), a, obs.r, eps, z, p);
  return factor * obs.x;
}

Eigen::VectorXd mean_score(const FusedDataset& data, const Eigen::VectorXd& beta,
                           const models::ErrorModel& model, const Eigen::VectorXd& pvec, double c,
                           const Eigen::VectorXd* weights) {
  const double v = model.variance();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(data.dim());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    double bx = beta.dot(data.X.row(i).transpose());
    double eps = data.r[i] == 1 ? data.y[i] - bx : 0.0;
    double factor = score_factor(model, v, c - bx, data.r[i], eps, data.z[i], pvec[i]);
    if (weights) factor *= (*weights)[i];
    acc.noalias() += factor * data.X.row(i).transpose();
  }
  return acc / static_cast<double>(data.size());
}

Eigen::VectorXd lambda_perp_element(const FusedObservation& obs, const Eigen::VectorXd& beta,
                                    const ScoreContext& ctx, const VectorFn& c_fn,
                                    const VectorFn& b_fn) {
  double F = ctx.model.cdf(ctx.c - beta.dot(obs.x));
  double p = ctx.prop.evaluate(obs.x);
  int z = obs.r == 1 ? (obs.y <= ctx.c ? 1 : 0) : obs.z;
  Eigen::VectorXd out = (obs.r - p) * (z - F) * b_fn(obs.x);
  if (obs.r == 1) out.noalias() += (obs.y - beta.dot(obs.x)) * c_fn(obs.x);
  return out;
}

EffFitResult eff_fit(const FusedDataset& data, const ScoreContext& ctx,
                     const Eigen::VectorXd& init, const Eigen::VectorXd* weights) {
  const Eigen::Index p = data.dim();
  if (init.size() != p) throw config_error("initial coefficient vector has the wrong length");
  if (!init.allFinite()) throw config_error("initial coefficient vector must be finite");

  const Eigen::VectorXd pvec = ctx.prop.evaluate_all(data);
  auto score_at = [&](const Eigen::VectorXd& b) {
    return mean_score(data, b, ctx.model, pvec, ctx.c, weights);
  };

  Eigen::VectorXd beta = init;
  Eigen::VectorXd G = score_at(beta);
  double norm = G.lpNorm<Eigen::Infinity>();
  if (!std::isfinite(norm)) throw solver_error("score is not finite at the initial point");

  const double tol = 1e-8;
  SolverDiagnostics diag;
  diag.score_norm = norm;

  while (norm >= tol && diag.iterations < 100) {
    Eigen::MatrixXd J(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
      double h = 1e-6 * std::max(1.0, std::fabs(beta[j]));
      Eigen::VectorXd bp = beta, bm = beta;
      bp[j] += h;
      bm[j] -= h;
      J.col(j) = (score_at(bp) - score_at(bm)) / (2.0 * h);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smin = svd.singularValues()(p - 1);
    double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > 1e12)
      throw solver_error("score Jacobian is singular or ill-conditioned");

    Eigen::VectorXd step = svd.solve(-G);
    bool accepted = false;
    Eigen::VectorXd beta_new, G_new;
    double norm_new = norm;
    double scale = 1.0;
    for (int half = 0; half <= 30; ++half) {
      beta_new = beta + scale * step;
      G_new = score_at(beta_new);
      norm_new = G_new.lpNorm<Eigen::Infinity>();
      if (std::isfinite(norm_new) && norm_new < norm) {
        accepted = true;
        break;
      }
      scale *= 0.5;
      ++diag.dampings;
    }
    if (!accepted) break;  // stalled: report non-convergence below

    beta = beta_new;
    G = G_new;
    norm = norm_new;
    ++diag.iterations;
    diag.score_norm = norm;
  }

  if (!(norm < tol)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", norm);
    throw solver_error("score solver stopped after " + std::to_string(diag.iterations) +
                       " iterations at " + format_vector(beta) + " with score norm " + buf);
  }
  return {beta, diag};
}

EffFitResult eff_fit(const FusedDataset& data, const ScoreContext& ctx) {
  return eff_fit(data, ctx, wls_fit(data, ctx.model));
}

CombineResult combine(const Eigen::VectorXd& beta_ls, const Eigen::VectorXd& beta_eff,
                      const Eigen::MatrixXd& cov_ls, const Eigen::MatrixXd& cov_d,
                      const Eigen::MatrixXd& cov_ls_d) {
  const Eigen::Index p = beta_ls.size();
  if (beta_eff.size() != p || cov_ls.rows() != p || cov_ls.cols() != p || cov_d.rows() != p ||
      cov_d.cols() != p || cov_ls_d.rows() != p || cov_ls_d.cols() != p)
    throw config_error("combine: dimension mismatch");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (cov_d + cov_d.transpose()));
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  double lambda = 0.0;
  if (!(lmin > 0.0) || lmax / lmin > 1e10)
    lambda = std::max(1e-8 * cov_d.trace() / static_cast<double>(p), 1e-300);

  Eigen::MatrixXd vd = cov_d + lambda * Eigen::MatrixXd::Identity(p, p);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(vd);

  CombineResult out;
  out.W = -(ldlt.solve(cov_ls_d.transpose())).transpose();
  out.beta = beta_ls + out.W * (beta_eff - beta_ls);
  Eigen::MatrixXd gram = cov_ls_d * ldlt.solve(cov_ls_d.transpose());
  Eigen::MatrixXd cov = cov_ls - gram;
  out.covariance = 0.5 * (cov + cov.transpose());
  return out;
}

}  // namespace fusereg::estimators
