#pragma once

namespace qcs {

// Standard normal density.
double normal_pdf(double x);

// Standard normal CDF through erfc, full relative accuracy in both tails.
double normal_cdf(double x);

// Inverse of normal_cdf for p in (0, 1). Acklam's rational approximation
// polished with one Halley step; absolute error below 1e-14 away from the
// extreme tails.
double normal_quantile(double p);

}  // namespace qcs
