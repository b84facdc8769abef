#ifndef FUSEREG_PROPENSITY_HPP
#define FUSEREG_PROPENSITY_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "fusereg/dataset.hpp"

namespace fusereg::propensity {

inline constexpr double kClampLo = 1e-6;
inline constexpr double kClampHi = 1.0 - 1e-6;

struct BernoulliSpec {
  double p = 0.5;
};
struct NormalSpec {
  double mean = 0.0;
  double sd = 1.0;
};
struct UniformSpec {
  double lo = 0.0;
  double hi = 1.0;
};

// Parametric two-sample density-ratio form: per-covariate product densities
// for the target and external populations, combined through
// p(x) = f_t(x) pi / {f_t(x) pi + f_e(x) (1 - pi)}.
struct DensityRatioSpec {
  double pi = 0.5;
  std::vector<Eigen::Index> binary_cols;
  std::vector<Eigen::Index> continuous_cols;
  std::vector<BernoulliSpec> target_binary;       // aligned with binary_cols
  std::vector<BernoulliSpec> external_binary;     // aligned with binary_cols
  std::vector<NormalSpec> target_continuous;      // aligned with continuous_cols
  std::vector<UniformSpec> external_continuous;   // aligned with continuous_cols
};

enum class PropensityKind { Constant, LogisticClassifier, ParametricDensityRatio };

// Evaluator for p(x) = P(R=1 | X=x). Fitted models clamp to
// [1e-6, 1-1e-6]; the explicit constant() constructor stores pi verbatim so
// p == 1 can be represented exactly when a run has no external rows.
class PropensityModel {
 public:
  PropensityModel() = default;

  static PropensityModel constant(double pi);
  static PropensityModel fit_constant(const FusedDataset& data,
                                      const Eigen::VectorXd* weights = nullptr,
                                      std::string* warning = nullptr);
  static PropensityModel fit_logistic(const FusedDataset& data,
                                      const Eigen::VectorXd* weights = nullptr);
  static PropensityModel fit_sim2_density_ratio(const FusedDataset& data,
                                                std::vector<Eigen::Index> binary_cols,
                                                std::vector<Eigen::Index> continuous_cols,
                                                const Eigen::VectorXd* weights = nullptr);
  static PropensityModel density_ratio(DensityRatioSpec spec);

  double evaluate(const Eigen::VectorXd& x) const;
  Eigen::VectorXd evaluate_all(const FusedDataset& data) const;

  PropensityKind kind() const { return kind_; }
  double pi() const { return pi_; }
  const Eigen::VectorXd& coefficients() const { return coef_; }
  const DensityRatioSpec& ratio_spec() const { return ratio_; }

 private:
  PropensityKind kind_ = PropensityKind::Constant;
  double pi_ = 0.5;
  Eigen::VectorXd coef_;     // LogisticClassifier, over x (x[0] == 1)
  DensityRatioSpec ratio_;   // ParametricDensityRatio
};

// How a fit (point estimate or bootstrap replicate) obtains its propensity
// model. Fixed skips refitting and reuses one model everywhere.
struct PropensityStrategy {
  enum class Kind { Fixed, Constant, Logistic, Sim2Ratio };

  Kind kind = Kind::Constant;
  PropensityModel fixed_model;
  std::vector<Eigen::Index> binary_cols;
  std::vector<Eigen::Index> continuous_cols;

  static PropensityStrategy fixed(PropensityModel model);
  static PropensityStrategy constant();
  static PropensityStrategy logistic();
  static PropensityStrategy sim2_ratio(std::vector<Eigen::Index> binary_cols,
                                       std::vector<Eigen::Index> continuous_cols);
  static PropensityStrategy parse(const std::string& name);

  PropensityModel fit(const FusedDataset& data, const Eigen::VectorXd* weights = nullptr) const;
};

}  // namespace fusereg::propensity

#endif  // FUSEREG_PROPENSITY_HPP
