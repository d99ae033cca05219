#pragma once

#include <vector>

namespace mibbo {

// Standard normal CDF, accurate to ~1 ulp via erfc.
double normal_cdf(double x);

// Standard normal quantile on (0, 1).  Acklam's rational approximation
// polished with one Halley step against normal_cdf; absolute error is below
// 1e-13 across the domain including far tails.  Throws std::domain_error
// outside (0, 1).
double normal_quantile(double p);

// Quantile of the chi-squared distribution with one degree of freedom,
// defined for p in [0, 1).  Uses the identity ppf(p) = z^2 with
// z = -normal_quantile((1 - p) / 2), which keeps the upper tail accurate.
double chi2_ppf_1df(double p);

// E||N(0, I_n)|| with the standard two-term asymptotic correction:
// sqrt(n) * (1 - 1/(4n) + 1/(21 n^2)).
double expected_norm(int n);

// Percentile with linear interpolation between closest ranks (values need
// not be sorted; q in [0, 1]).  Throws std::invalid_argument on an empty
// sample or q outside [0, 1].
double percentile(std::vector<double> values, double q);

}  // namespace mibbo
