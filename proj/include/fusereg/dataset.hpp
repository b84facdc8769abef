#ifndef FUSEREG_DATASET_HPP
#define FUSEREG_DATASET_HPP

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fusereg/common.hpp"

namespace fusereg {

// One pooled-sample row. Target rows (r=1) observe the continuous outcome y;
// external rows (r=0) observe only the dichotomized indicator z.
struct FusedObservation {
  int r = 1;
  double y = std::numeric_limits<double>::quiet_NaN();
  int z = -1;
  Eigen::VectorXd x;  // x[0] == 1
};

// Column-wise pooled sample. z is materialized for every row (target rows
// dichotomize y at the cutoff) so score loops never branch on missingness;
// y is NaN on external rows and must never be read there.
class FusedDataset {
 public:
  Eigen::MatrixXd X;            // N x p design matrix, first column all ones
  Eigen::VectorXd y;            // NaN where r == 0
  Eigen::VectorXi r;            // 1 = target, 0 = external
  Eigen::VectorXi z;            // I(y <= cutoff) on target rows, stored on external rows
  double cutoff = 0.0;
  std::vector<std::string> covariate_names;  // length p; [0] = "Intercept"

  static FusedDataset from_rows(const std::vector<FusedObservation>& rows, double cutoff);

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }
  Eigen::Index target_count() const { return (r.array() == 1).count(); }
  Eigen::Index external_count() const { return (r.array() == 0).count(); }

  FusedObservation row(Eigen::Index i) const {
    FusedObservation obs;
    obs.r = r[i];
    obs.y = y[i];
    obs.z = z[i];
    obs.x = X.row(i).transpose();
    return obs;
  }

  // Keeps the rows whose flag is true, preserving order.
  FusedDataset filter(const std::vector<bool>& keep) const;

  void validate() const;
};

}  // namespace fusereg

#endif  // FUSEREG_DATASET_HPP
