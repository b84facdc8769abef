#ifndef FUSEREG_MATH_HPP
#define FUSEREG_MATH_HPP

#include <cmath>
#include <limits>

#include "fusereg/common.hpp"

namespace fusereg {

inline constexpr double kPi = 3.14159265358979323846264338328;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993;

inline double normal_pdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

// erfc-based form keeps full relative accuracy deep in the lower tail.
inline double normal_cdf(double t) { return 0.5 * std::erfc(-t * 0.70710678118654752440084436210); }

// Upper tail 1 - normal_cdf(t), accurate deep in the upper tail.
inline double normal_sf(double t) { return 0.5 * std::erfc(t * 0.70710678118654752440084436210); }

// Acklam's rational approximation, polished with one Halley step against
// erfc. Accurate to ~1e-15 over (0,1).
inline double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw Error(ErrorStage::Solver, "normal_quantile: p must lie strictly inside (0,1)");

  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};

  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement: e = Phi(x) - p, step = e / phi(x).
  double e = 0.5 * std::erfc(-x * 0.70710678118654752440084436210) - p;
  double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

inline double logistic_cdf(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double et = std::exp(t);
  return et / (1.0 + et);
}

inline double logistic_pdf(double t) {
  double s = logistic_cdf(-std::fabs(t));  // evaluate on the small side
  return s * (1.0 - s);
}

}  // namespace fusereg

#endif  // FUSEREG_MATH_HPP
