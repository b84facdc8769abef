#include "fusereg/error_model.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace fusereg::models {

namespace {

std::vector<MixtureComponent> validate_components(std::vector<MixtureComponent> comps,
                                                  bool recenter) {
  if (comps.empty()) throw config_error("mixture needs at least one component");
  double sum = 0.0;
  for (const auto& c : comps) {
    if (!(c.weight > 0.0)) throw config_error("mixture weights must be positive");
    if (!(c.sigma > 0.0)) throw config_error("mixture sigmas must be positive");
    if (!std::isfinite(c.mu)) throw config_error("mixture means must be finite");
    sum += c.weight;
  }
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw config_error("mixture weights must sum to a positive value");
  for (auto& c : comps) c.weight /= sum;

  double mean = 0.0;
  for (const auto& c : comps) mean += c.weight * c.mu;
  if (recenter) {
    for (auto& c : comps) c.mu -= mean;
  } else if (std::fabs(mean) > 1e-10) {
    throw config_error("mixture mean is " + std::to_string(mean) +
                       ", not zero; recenter it or adjust the components");
  }
  return comps;
}

double mixture_variance(const std::vector<MixtureComponent>& comps) {
  double mean = 0.0, second = 0.0;
  for (const auto& c : comps) {
    mean += c.weight * c.mu;
    second += c.weight * (c.sigma * c.sigma + c.mu * c.mu);
  }
  return second - mean * mean;
}

}  // namespace

ErrorModel ErrorModel::standard_normal() {
  return ErrorModel(ModelKind::StandardNormal, {}, 1.0);
}

ErrorModel ErrorModel::standard_logistic() {
  return ErrorModel(ModelKind::StandardLogistic, {}, kPi * kPi / 3.0);
}

ErrorModel ErrorModel::gaussian_mixture(std::vector<MixtureComponent> comps, bool recenter) {
  auto checked = validate_components(std::move(comps), recenter);
  double var = mixture_variance(checked);
  return ErrorModel(ModelKind::GaussianMixture, std::move(checked), var);
}

ErrorModel ErrorModel::parse(const std::string& text) {
  if (text == "normal") return standard_normal();
  if (text == "logistic") return standard_logistic();
  const std::string prefix = "mix:";
  if (text.rfind(prefix, 0) != 0)
    throw config_error("unknown error model '" + text +
                       "'; expected normal, logistic, or mix:w,mu,sigma;...");

  std::vector<MixtureComponent> comps;
  std::stringstream body(text.substr(prefix.size()));
  std::string part;
  while (std::getline(body, part, ';')) {
    if (part.empty()) continue;
    MixtureComponent c{};
    char trailing;
    if (std::sscanf(part.c_str(), "%lf,%lf,%lf%c", &c.weight, &c.mu, &c.sigma, &trailing) != 3)
      throw config_error("bad mixture component '" + part + "'; expected w,mu,sigma");
    comps.push_back(c);
  }
  if (comps.empty()) throw config_error("mixture spec '" + text + "' has no components");
  return gaussian_mixture(std::move(comps), false);
}

std::string ErrorModel::describe() const {
  switch (kind_) {
    case ModelKind::StandardNormal:
      return "normal";
    case ModelKind::StandardLogistic:
      return "logistic";
    case ModelKind::GaussianMixture:
      break;
  }
  std::string out = "mix:";
  char buf[128];
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const auto& c = comps_[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", c.weight, c.mu, c.sigma);
    if (i) out += ';';
    out += buf;
  }
  return out;
}

ReparameterizedModel::ReparameterizedModel(ErrorModel base, Eigen::VectorXd beta,
                                           Eigen::VectorXd alpha, double c)
    : base_(std::move(base)), beta_(std::move(beta)), alpha_(std::move(alpha)), c_(c) {
  if (beta_.size() != alpha_.size())
    throw config_error("reparameterization: alpha and beta must have equal length");
  if ((beta_ - alpha_).lpNorm<Eigen::Infinity>() == 0.0)
    throw config_error("reparameterization: alpha must differ from beta");
}

double ReparameterizedModel::scale(const Eigen::VectorXd& x) const {
  double denom = c_ - alpha_.dot(x);
  if (denom == 0.0)
    throw data_error("reparameterized model undefined at x with alpha'x equal to the cutoff");
  double F = base_.cdf(c_ - beta_.dot(x));
  if (!(F > 0.0) || !(F < 1.0))
    throw data_error("reparameterized model: base cdf saturated at this x");
  return normal_quantile(F) / denom;
}

double ReparameterizedModel::cdf(double t, const Eigen::VectorXd& x) const {
  return normal_cdf(t * scale(x));
}

ReparameterizedModel unidentifiable_reparam(const ErrorModel& base, Eigen::VectorXd beta,
                                            Eigen::VectorXd alpha, double c) {
  return ReparameterizedModel(base, std::move(beta), std::move(alpha), c);
}

}  // namespace fusereg::models
