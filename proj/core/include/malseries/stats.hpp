#pragma once

#include <cstddef>
#include <span>

namespace malseries {

double normal_cdf(double x);

/// Inverse standard normal CDF for p in (0, 1). Rational approximation
/// refined by one Halley step; absolute error well below 1.5e-9.
double normal_quantile(double p);

/// Two-sided normal critical value at the given confidence (e.g. 0.95 -> 1.96).
double normal_two_sided_critical(double confidence);

/// Upper tail of the chi-squared distribution with k degrees of freedom.
double chi_squared_sf(double x, double k);

/// Two-sided p-value of a Student-t statistic with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

/// Two-sided Student-t critical value at the given confidence.
double student_t_two_sided_critical(double confidence, double dof);

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // population (divide by n)
double median(std::span<const double> x);    // input copied, not modified

/// Moment-based sample skewness (population moments, no bias correction).
double skewness(std::span<const double> x);
/// Raw (non-excess) kurtosis; 3 for the normal distribution.
double kurtosis(std::span<const double> x);

}  // namespace malseries
