#ifndef FUSEREG_TESTS_HELPERS_HPP
#define FUSEREG_TESTS_HELPERS_HPP

#include <initializer_list>
#include <vector>

#include <Eigen/Core>

#include "fusereg/dataset.hpp"

namespace helpers {

inline Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

inline fusereg::FusedObservation target_obs(double y, std::initializer_list<double> x) {
  fusereg::FusedObservation o;
  o.r = 1;
  o.y = y;
  o.x = vec(x);
  return o;
}

inline fusereg::FusedObservation external_obs(int z, std::initializer_list<double> x) {
  fusereg::FusedObservation o;
  o.r = 0;
  o.z = z;
  o.x = vec(x);
  return o;
}

}  // namespace helpers

#endif  // FUSEREG_TESTS_HELPERS_HPP
