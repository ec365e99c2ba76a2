#include "ionnode/numerics.hpp"

#include <gsl/gsl_sf_erf.h>

#include <cmath>
#include <numbers>

namespace ionnode {

double erfcx(double x) {
    if (x <= 0.0) return std::exp(x * x) * std::erfc(x);
    if (x > 1e8) return 1.0 / (x * std::sqrt(std::numbers::pi));
    return std::exp(x * x + gsl_sf_log_erfc(x));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace ionnode
