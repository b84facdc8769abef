#include "fusereg/propensity.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fusereg/math.hpp"

namespace fusereg::propensity {

namespace {

double clampp(double p) { return std::min(kClampHi, std::max(kClampLo, p)); }

struct WeightedMoments {
  double mean;
  double sd;  // denominator sum(w) - sum(w^2)/sum(w): n-1 with unit weights
};

WeightedMoments weighted_moments(const Eigen::VectorXd& values, const Eigen::VectorXd& w) {
  double sw = w.sum();
  double mean = w.dot(values) / sw;
  double ssq = (w.array() * (values.array() - mean).square()).sum();
  double denom = sw - w.squaredNorm() / sw;
  double var = denom > 0.0 ? ssq / denom : 0.0;
  return {mean, std::sqrt(std::max(var, 0.0))};
}

Eigen::VectorXd effective_weights(const FusedDataset& data, const Eigen::VectorXd* weights) {
  if (!weights) return Eigen::VectorXd::Ones(data.size());
  if (weights->size() != data.size())
    throw data_error("weight vector length differs from dataset size");
  if (weights->minCoeff() < 0.0) throw data_error("weights must be nonnegative");
  if (!(weights->sum() > 0.0)) throw data_error("weights must not all be zero");
  return *weights;
}

void check_binary_column(const FusedDataset& data, Eigen::Index col) {
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    double v = data.X(i, col);
    if (v != 0.0 && v != 1.0)
      throw data_error("column " + data.covariate_names[static_cast<std::size_t>(col)] +
                       " is declared binary but row " + std::to_string(i + 1) + " holds " +
                       std::to_string(v));
  }
}

}  // namespace

PropensityModel PropensityModel::constant(double pi) {
  if (!(pi > 0.0) || pi > 1.0) throw config_error("constant propensity must lie in (0, 1]");
  PropensityModel m;
  m.kind_ = PropensityKind::Constant;
  m.pi_ = pi;
  return m;
}

PropensityModel PropensityModel::fit_constant(const FusedDataset& data,
                                              const Eigen::VectorXd* weights,
                                              std::string* warning) {
  Eigen::VectorXd w = effective_weights(data, weights);
  double sw = w.sum();
  double swr = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) swr += w[i] * data.r[i];
  double pi = swr / sw;
  if (pi < kClampLo || pi > kClampHi) {
    if (warning)
      *warning = "every row comes from " + std::string(pi > 0.5 ? "the target" : "the external") +
                 " population; propensity clamped";
    pi = clampp(pi);
  }
  PropensityModel m;
  m.kind_ = PropensityKind::Constant;
  m.pi_ = pi;
  return m;
}

PropensityModel PropensityModel::fit_logistic(const FusedDataset& data,
                                              const Eigen::VectorXd* weights) {
  Eigen::VectorXd w = effective_weights(data, weights);
  const Eigen::Index n = data.size();
  const Eigen::Index p = data.dim();
  if (n < p) throw data_error("logistic fit needs at least as many rows as covariates");

  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd rvec = data.r.cast<double>();
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::VectorXd eta = data.X * gamma;
    Eigen::VectorXd mu(n), s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double m = logistic_cdf(eta[i]);
      m = std::min(1.0 - 1e-10, std::max(1e-10, m));
      mu[i] = m;
      s[i] = w[i] * m * (1.0 - m);
    }
    Eigen::MatrixXd H = data.X.transpose() * s.asDiagonal() * data.X;
    Eigen::VectorXd g = data.X.transpose() * (w.array() * (rvec - mu).array()).matrix();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smin = svd.singularValues()(p - 1);
    double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > 1e12)
      throw data_error("logistic fit: pooled design matrix is rank deficient");

    Eigen::VectorXd delta = svd.solve(g);
    gamma += delta;

    if (delta.lpNorm<Eigen::Infinity>() < 1e-8) {
      PropensityModel m;
      m.kind_ = PropensityKind::LogisticClassifier;
      m.coef_ = gamma;
      m.pi_ = rvec.mean();
      return m;
    }
    if (gamma.lpNorm<Eigen::Infinity>() > 30.0) {
      Eigen::Index worst;
      gamma.cwiseAbs().maxCoeff(&worst);
      throw data_error("logistic fit: separation suspected along covariate " +
                       data.covariate_names[static_cast<std::size_t>(worst)]);
    }
  }
  throw solver_error("logistic fit did not converge in 50 iterations");
}

PropensityModel PropensityModel::fit_sim2_density_ratio(const FusedDataset& data,
                                                        std::vector<Eigen::Index> binary_cols,
                                                        std::vector<Eigen::Index> continuous_cols,
                                                        const Eigen::VectorXd* weights) {
  Eigen::VectorXd w = effective_weights(data, weights);
  const Eigen::Index n = data.size();

  std::vector<Eigen::Index> tgt, ext;
  for (Eigen::Index i = 0; i < n; ++i) (data.r[i] == 1 ? tgt : ext).push_back(i);
  if (tgt.empty() || ext.empty())
    throw data_error("density-ratio fit needs rows from both populations");

  auto subvec = [&](const std::vector<Eigen::Index>& idx, Eigen::Index col, bool take_weights) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
      out[static_cast<Eigen::Index>(k)] = take_weights ? w[idx[k]] : data.X(idx[k], col);
    return out;
  };
  Eigen::VectorXd wt = subvec(tgt, 0, true);
  Eigen::VectorXd we = subvec(ext, 0, true);

  DensityRatioSpec spec;
  spec.binary_cols = std::move(binary_cols);
  spec.continuous_cols = std::move(continuous_cols);
  spec.pi = (data.r.cast<double>().array() * w.array()).sum() / w.sum();
  spec.pi = clampp(spec.pi);

  for (Eigen::Index col : spec.binary_cols) {
    check_binary_column(data, col);
    spec.target_binary.push_back({weighted_moments(subvec(tgt, col, false), wt).mean});
    spec.external_binary.push_back({weighted_moments(subvec(ext, col, false), we).mean});
  }
  for (Eigen::Index col : spec.continuous_cols) {
    auto tm = weighted_moments(subvec(tgt, col, false), wt);
    if (!(tm.sd > 0.0))
      throw data_error("density-ratio fit: zero spread in target column " +
                       data.covariate_names[static_cast<std::size_t>(col)]);
    spec.target_continuous.push_back({tm.mean, tm.sd});

    Eigen::VectorXd ev = subvec(ext, col, false);
    double lo = ev.minCoeff(), hi = ev.maxCoeff();
    if (!(hi > lo))
      throw data_error("density-ratio fit: degenerate uniform range in external column " +
                       data.covariate_names[static_cast<std::size_t>(col)]);
    spec.external_continuous.push_back({lo, hi});
  }
  return density_ratio(std::move(spec));
}

PropensityModel PropensityModel::density_ratio(DensityRatioSpec spec) {
  if (!(spec.pi > 0.0) || !(spec.pi < 1.0))
    throw config_error("density-ratio pi must lie in (0, 1)");
  if (spec.binary_cols.size() != spec.target_binary.size() ||
      spec.binary_cols.size() != spec.external_binary.size() ||
      spec.continuous_cols.size() != spec.target_continuous.size() ||
      spec.continuous_cols.size() != spec.external_continuous.size())
    throw config_error("density-ratio spec: column lists and density lists differ in length");
  for (const auto& n : spec.target_continuous)
    if (!(n.sd > 0.0)) throw config_error("density-ratio spec: normal sd must be positive");
  for (const auto& u : spec.external_continuous)
    if (!(u.hi > u.lo)) throw config_error("density-ratio spec: uniform range must be proper");

  PropensityModel m;
  m.kind_ = PropensityKind::ParametricDensityRatio;
  m.pi_ = spec.pi;
  m.ratio_ = std::move(spec);
  return m;
}

double PropensityModel::evaluate(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case PropensityKind::Constant:
      return pi_;
    case PropensityKind::LogisticClassifier:
      return clampp(logistic_cdf(coef_.dot(x)));
    case PropensityKind::ParametricDensityRatio:
      break;
  }
  double ft = 1.0, fe = 1.0;
  for (std::size_t k = 0; k < ratio_.binary_cols.size(); ++k) {
    bool one = x[ratio_.binary_cols[k]] > 0.5;
    double pt = ratio_.target_binary[k].p;
    double pe = ratio_.external_binary[k].p;
    ft *= one ? pt : 1.0 - pt;
    fe *= one ? pe : 1.0 - pe;
  }
  for (std::size_t k = 0; k < ratio_.continuous_cols.size(); ++k) {
    double v = x[ratio_.continuous_cols[k]];
    const auto& nrm = ratio_.target_continuous[k];
    ft *= normal_pdf((v - nrm.mean) / nrm.sd) / nrm.sd;
    const auto& uni = ratio_.external_continuous[k];
    fe *= (v >= uni.lo && v <= uni.hi) ? 1.0 / (uni.hi - uni.lo) : 0.0;
  }
  double num = pi_ * ft;
  double den = num + (1.0 - pi_) * fe;
  if (den <= 0.0) return clampp(pi_);  // both densities underflowed
  return clampp(num / den);
}

Eigen::VectorXd PropensityModel::evaluate_all(const FusedDataset& data) const {
  Eigen::VectorXd out(data.size());
  if (kind_ == PropensityKind::Constant) {
    out.setConstant(pi_);
    return out;
  }
  for (Eigen::Index i = 0; i < data.size(); ++i) out[i] = evaluate(data.X.row(i).transpose());
  return out;
}

PropensityStrategy PropensityStrategy::fixed(PropensityModel model) {
  PropensityStrategy s;
  s.kind = Kind::Fixed;
  s.fixed_model = std::move(model);
  return s;
}

PropensityStrategy PropensityStrategy::constant() {
  PropensityStrategy s;
  s.kind = Kind::Constant;
  return s;
}

PropensityStrategy PropensityStrategy::logistic() {
  PropensityStrategy s;
  s.kind = Kind::Logistic;
  return s;
}

PropensityStrategy PropensityStrategy::sim2_ratio(std::vector<Eigen::Index> binary_cols,
                                                  std::vector<Eigen::Index> continuous_cols) {
  PropensityStrategy s;
  s.kind = Kind::Sim2Ratio;
  s.binary_cols = std::move(binary_cols);
  s.continuous_cols = std::move(continuous_cols);
  return s;
}

PropensityStrategy PropensityStrategy::parse(const std::string& name) {
  if (name == "constant") return constant();
  if (name == "logistic") return logistic();
  if (name == "sim2-ratio") return sim2_ratio({}, {});
  throw config_error("unknown propensity strategy '" + name +
                     "'; expected constant, logistic, or sim2-ratio");
}

PropensityModel PropensityStrategy::fit(const FusedDataset& data,
                                        const Eigen::VectorXd* weights) const {
  switch (kind) {
    case Kind::Fixed:
      return fixed_model;
    case Kind::Constant:
      return PropensityModel::fit_constant(data, weights);
    case Kind::Logistic:
      return PropensityModel::fit_logistic(data, weights);
    case Kind::Sim2Ratio:
      break;
  }
  auto binary = binary_cols;
  auto continuous = continuous_cols;
  if (binary.empty() && continuous.empty()) {
    // Classify by content: a column whose values are all 0/1 counts as binary.
    for (Eigen::Index j = 1; j < data.dim(); ++j) {
      bool is_binary = true;
      for (Eigen::Index i = 0; i < data.size() && is_binary; ++i)
        is_binary = data.X(i, j) == 0.0 || data.X(i, j) == 1.0;
      (is_binary ? binary : continuous).push_back(j);
    }
  }
  return PropensityModel::fit_sim2_density_ratio(data, binary, continuous, weights);
}

}  // namespace fusereg::propensity
