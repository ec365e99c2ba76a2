// numerics.hpp - special functions shared by the analytic curves and fits
#pragma once

namespace ionnode {

/// Scaled complementary error function exp(x^2) erfc(x), finite for large x.
double erfcx(double x);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace ionnode
