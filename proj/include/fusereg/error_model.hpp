#ifndef FUSEREG_ERROR_MODEL_HPP
#define FUSEREG_ERROR_MODEL_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fusereg/common.hpp"
#include "fusereg/math.hpp"
#include "fusereg/rng.hpp"

namespace fusereg::models {

struct MixtureComponent {
  double weight;
  double mu;
  double sigma;
};

enum class ModelKind { StandardNormal, StandardLogistic, GaussianMixture };

// A zero-mean error distribution used either as the data-generating law or as
// the working shape inside the score. Immutable after construction.
class ErrorModel {
 public:
  ErrorModel() : kind_(ModelKind::StandardNormal), variance_(1.0) {}

  static ErrorModel standard_normal();
  static ErrorModel standard_logistic();
  // recenter=true shifts every mu by -sum(w*mu) so the mean is exactly zero;
  // recenter=false rejects mixtures whose mean exceeds 1e-10 in magnitude.
  static ErrorModel gaussian_mixture(std::vector<MixtureComponent> comps, bool recenter);
  // Accepts "normal", "logistic", or "mix:w,mu,sigma;w,mu,sigma;...".
  static ErrorModel parse(const std::string& text);

  ModelKind kind() const { return kind_; }
  const std::vector<MixtureComponent>& components() const { return comps_; }
  double variance() const { return variance_; }

  double cdf(double t) const;
  double pdf(double t) const;
  // m1(a) = integral of t f(t) dt over (-inf, a]; vanishes at both ends
  // because the mean is zero.
  double partial_first_moment(double a) const;
  // Fused evaluation of (cdf, m1) at one point: the score needs both and this
  // sits in the innermost loop of every bootstrap replicate.
  void cdf_and_m1(double a, double& F, double& m1) const;
  // Same, but also returns Fbar = 1 - F computed directly. Once F rounds to
  // 1.0 the product F*(1-F) evaluates to zero even though the true tail mass
  // is ~1e-18 and still dominates m1^2; callers that form the score
  // denominator must use Fbar instead of 1 - F.
  void cdf_and_m1(double a, double& F, double& Fbar, double& m1) const;

  double sample(RngStream& rng) const;
  std::string describe() const;

 private:
  ErrorModel(ModelKind kind, std::vector<MixtureComponent> comps, double variance)
      : kind_(kind), comps_(std::move(comps)), variance_(variance) {}

  ModelKind kind_;
  std::vector<MixtureComponent> comps_;  // populated for GaussianMixture only
  double variance_;
};

// log(1 + e^t) without overflow for large |t|.
inline double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::fabs(t))); }

inline double ErrorModel::cdf(double t) const {
  switch (kind_) {
    case ModelKind::StandardNormal:
      return normal_cdf(t);
    case ModelKind::StandardLogistic:
      return logistic_cdf(t);
    case ModelKind::GaussianMixture:
      break;
  }
  double F = 0.0;
  for (const auto& c : comps_) F += c.weight * normal_cdf((t - c.mu) / c.sigma);
  return F;
}

inline double ErrorModel::pdf(double t) const {
  switch (kind_) {
    case ModelKind::StandardNormal:
      return normal_pdf(t);
    case ModelKind::StandardLogistic:
      return logistic_pdf(t);
    case ModelKind::GaussianMixture:
      break;
  }
  double f = 0.0;
  for (const auto& c : comps_) f += c.weight * normal_pdf((t - c.mu) / c.sigma) / c.sigma;
  return f;
}

inline double ErrorModel::partial_first_moment(double a) const {
  double F, m1;
  cdf_and_m1(a, F, m1);
  return m1;
}

inline void ErrorModel::cdf_and_m1(double a, double& F, double& m1) const {
  double Fbar;
  cdf_and_m1(a, F, Fbar, m1);
}

inline void ErrorModel::cdf_and_m1(double a, double& F, double& Fbar, double& m1) const {
  if (std::isinf(a)) {
    F = a > 0.0 ? 1.0 : 0.0;
    Fbar = 1.0 - F;
    m1 = 0.0;
    return;
  }
  switch (kind_) {
    case ModelKind::StandardNormal:
      F = normal_cdf(a);
      Fbar = normal_sf(a);
      m1 = -normal_pdf(a);
      return;
    case ModelKind::StandardLogistic:
      F = logistic_cdf(a);
      Fbar = logistic_cdf(-a);
      // Integration by parts gives m1 = a F - softplus(a); for a > 0 the two
      // terms cancel to ~e^-a, so rewrite around the upper tail instead.
      m1 = a > 0.0 ? -a * Fbar - std::log1p(std::exp(-a)) : a * F - softplus(a);
      return;
    case ModelKind::GaussianMixture:
      break;
  }
  // m1 over (-inf, a] and its complement over [a, inf) sum to the mean, which
  // is zero; each closed form is used on the half-line where its terms stay
  // small instead of cancelling.
  F = 0.0;
  Fbar = 0.0;
  m1 = 0.0;
  for (const auto& c : comps_) {
    double t = (a - c.mu) / c.sigma;
    double Ft = normal_cdf(t);
    double St = normal_sf(t);
    double ft = normal_pdf(t);
    F += c.weight * Ft;
    Fbar += c.weight * St;
    m1 += a > 0.0 ? -c.weight * (c.mu * St + c.sigma * ft)
                  : c.weight * (c.mu * Ft - c.sigma * ft);
  }
}

inline double ErrorModel::sample(RngStream& rng) const {
  switch (kind_) {
    case ModelKind::StandardNormal:
      return rng.normal();
    case ModelKind::StandardLogistic: {
      double u = rng.uniform();
      return std::log(u / (1.0 - u));
    }
    case ModelKind::GaussianMixture:
      break;
  }
  // One uniform + one normal per draw regardless of the selected component,
  // so the stream advances identically along every path.
  double u = rng.uniform();
  double g = rng.normal();
  double acc = 0.0;
  for (const auto& c : comps_) {
    acc += c.weight;
    if (u <= acc) return c.mu + c.sigma * g;
  }
  const auto& last = comps_.back();
  return last.mu + last.sigma * g;
}

// Conditional-on-x distribution G(t, x) = Phi(t * s(x)) constructed so the
// external-data likelihood under (G, alpha) equals the one under
// (base, beta) exactly: dichotomized outcomes cannot identify the pair
// (distribution, coefficients).
class ReparameterizedModel {
 public:
  ReparameterizedModel(ErrorModel base, Eigen::VectorXd beta, Eigen::VectorXd alpha, double c);

  // s(x) = Phi^{-1}{F(c - beta'x)} / (c - alpha'x); undefined when
  // alpha'x == c or when the base cdf saturates at 0 or 1.
  double scale(const Eigen::VectorXd& x) const;
  double cdf(double t, const Eigen::VectorXd& x) const;

  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  double cutoff() const { return c_; }

 private:
  ErrorModel base_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd alpha_;
  double c_;
};

ReparameterizedModel unidentifiable_reparam(const ErrorModel& base, Eigen::VectorXd beta,
                                            Eigen::VectorXd alpha, double c);

}  // namespace fusereg::models

#endif  // FUSEREG_ERROR_MODEL_HPP
