#pragma once

#include <span>
#include <utility>
#include <vector>

#include "malseries/ardl.hpp"

namespace malseries {

struct AcfResult {
  std::vector<double> values;  // lags 1..max_lag
  double band = 0;             // +- z / sqrt(n)
  int max_lag = 0;
};

/// Default maximum lag: floor(10 * log10(n)).
int default_acf_max_lag(size_t n);

/// Sample autocorrelation with full-series denominator (biased estimator).
AcfResult acf(std::span<const double> series, int max_lag, double confidence = 0.95);

struct TestResult {
  double statistic = 0;
  double p_value = 1;
  bool reject_at_95 = false;
};

struct AdfResult {
  double statistic = 0;
  double p_value = 1;  // interpolated from the critical-value tabulation
  bool reject_at_95 = false;
  int lags = 0;
  double critical_1 = 0, critical_5 = 0, critical_10 = 0;
};

/// Augmented Dickey-Fuller test, constant and no trend. max_lag < 0 selects
/// the lag length automatically: upper bound floor(12 (n/100)^{1/4}),
/// trimmed by AIC. Rejection against finite-sample critical values from the
/// MacKinnon response surface.
AdfResult adf_test(std::span<const double> series, int max_lag = -1);

/// Jarque-Bera: JB = n/6 (S^2 + (K-3)^2 / 4), chi-squared with 2 dof.
TestResult jarque_bera(std::span<const double> series);

/// Ljung-Box portmanteau statistic over lags 1..max_lag.
TestResult ljung_box(std::span<const double> series, int max_lag);

/// Sorted sample values against normal quantiles at positions (i - 0.5)/n.
std::vector<std::pair<double, double>> qq_points(std::span<const double> series);

/// Percent of fitted values above 100. Only meaningful for MalShare fits.
double share_exceedance(const ArdlFit& fit);

}  // namespace malseries
