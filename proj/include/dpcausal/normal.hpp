#pragma once

namespace dpcausal {

// Standard normal CDF, computed from erfc.
double norm_cdf(double x);

// log(Phi(x)), finite for any x representable as double. Uses erfc in the
// moderate range and an asymptotic expansion once erfc underflows.
double log_norm_cdf(double x);

// Inverse standard normal CDF for p in (0, 1). Rational approximation
// polished with one Halley step; relative error near machine precision.
double norm_quantile(double p);

}  // namespace dpcausal
