#include "malseries/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "malseries/stats.hpp"

namespace malseries {

int default_acf_max_lag(size_t n) {
  if (n < 2) throw std::invalid_argument("series too short for ACF");
  return static_cast<int>(std::floor(10.0 * std::log10(static_cast<double>(n))));
}

AcfResult acf(std::span<const double> series, int max_lag, double confidence) {
  long n = static_cast<long>(series.size());
  if (max_lag < 1) throw std::invalid_argument("max_lag must be >= 1");
  if (n < max_lag + 1) throw std::invalid_argument("series too short for requested lag");
  double m = mean(series);
  double denom = 0;
  for (double v : series) denom += (v - m) * (v - m);
  if (denom <= 0) throw std::invalid_argument("zero-variance series has no ACF");

  AcfResult res;
  res.max_lag = max_lag;
  res.band = normal_two_sided_critical(confidence) / std::sqrt(static_cast<double>(n));
  res.values.resize(static_cast<size_t>(max_lag));
  for (int l = 1; l <= max_lag; ++l) {
    double num = 0;
    for (long t = 0; t + l < n; ++t)
      num += (series[static_cast<size_t>(t)] - m) *
             (series[static_cast<size_t>(t + l)] - m);
    res.values[static_cast<size_t>(l - 1)] = num / denom;
  }
  return res;
}

namespace {

struct AdfRegression {
  double delta_t = 0;  // t-ratio of the level coefficient
  double rss = 0;
  long nobs = 0;
  int params = 0;
};

// Regression of dx_t on [1, x_{t-1}, dx_{t-1}..dx_{t-p}] over rows
// t = first_t .. n-1 (indices into the level series).
AdfRegression adf_regression(std::span<const double> x, int p, long first_t) {
  long n = static_cast<long>(x.size());
  long rows = n - first_t;
  int cols = 2 + p;
  Eigen::VectorXd y(rows);
  Eigen::MatrixXd X(rows, cols);
  for (long i = 0; i < rows; ++i) {
    long t = first_t + i;
    y(i) = x[static_cast<size_t>(t)] - x[static_cast<size_t>(t - 1)];
    X(i, 0) = 1.0;
    X(i, 1) = x[static_cast<size_t>(t - 1)];
    for (int j = 1; j <= p; ++j)
      X(i, 1 + j) =
          x[static_cast<size_t>(t - j)] - x[static_cast<size_t>(t - j - 1)];
  }
  OlsResult ols = fit_ols(y, X);
  AdfRegression r;
  double se = std::sqrt(ols.covariance(1, 1));
  r.delta_t = ols.coefs(1) / se;
  r.rss = ols.sigma2 * static_cast<double>(ols.dof);
  r.nobs = rows;
  r.params = cols;
  return r;
}

double mackinnon_cv(const double (&b)[4], double n) {
  return b[0] + b[1] / n + b[2] / (n * n) + b[3] / (n * n * n);
}

}  // namespace

AdfResult adf_test(std::span<const double> series, int max_lag) {
  long n = static_cast<long>(series.size());
  if (n < 20) throw std::invalid_argument("ADF needs at least 20 observations");

  int p;
  if (max_lag >= 0) {
    p = max_lag;
  } else {
    int pmax = static_cast<int>(
        std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    pmax = std::min<int>(pmax, static_cast<int>(n / 2 - 3));
    // AIC over a common sample so the candidates are comparable.
    long first_t = pmax + 1;
    double best_aic = std::numeric_limits<double>::infinity();
    p = 0;
    for (int cand = 0; cand <= pmax; ++cand) {
      AdfRegression r = adf_regression(series, cand, first_t);
      double nobs = static_cast<double>(r.nobs);
      double aic = nobs * std::log(r.rss / nobs) + 2.0 * r.params;
      if (aic < best_aic) {
        best_aic = aic;
        p = cand;
      }
    }
  }
  if (n - (p + 1) < p + 4) throw std::invalid_argument("series too short for ADF lags");

  AdfRegression reg = adf_regression(series, p, p + 1);

  static const double cv1_b[4] = {-3.43035, -6.5393, -16.786, -79.433};
  static const double cv5_b[4] = {-2.86154, -2.8903, -4.234, -40.04};
  static const double cv10_b[4] = {-2.56677, -1.5384, -2.809, 0.0};

  AdfResult res;
  res.statistic = reg.delta_t;
  res.lags = p;
  double nobs = static_cast<double>(reg.nobs);
  res.critical_1 = mackinnon_cv(cv1_b, nobs);
  res.critical_5 = mackinnon_cv(cv5_b, nobs);
  res.critical_10 = mackinnon_cv(cv10_b, nobs);
  res.reject_at_95 = res.statistic < res.critical_5;

  // Approximate p-value by interpolating through the tabulated quantiles.
  double s = res.statistic;
  if (s <= res.critical_1)
    res.p_value = 0.005;
  else if (s <= res.critical_5)
    res.p_value = 0.01 + 0.04 * (s - res.critical_1) / (res.critical_5 - res.critical_1);
  else if (s <= res.critical_10)
    res.p_value = 0.05 + 0.05 * (s - res.critical_5) / (res.critical_10 - res.critical_5);
  else
    res.p_value = std::min(0.99, 0.10 + 0.2 * (s - res.critical_10));
  return res;
}

TestResult jarque_bera(std::span<const double> series) {
  size_t n = series.size();
  if (n < 8) throw std::invalid_argument("Jarque-Bera needs at least 8 observations");
  double s = skewness(series);
  double k = kurtosis(series);
  TestResult res;
  res.statistic =
      static_cast<double>(n) / 6.0 * (s * s + (k - 3.0) * (k - 3.0) / 4.0);
  res.p_value = chi_squared_sf(res.statistic, 2.0);
  res.reject_at_95 = res.p_value < 0.05;
  return res;
}

TestResult ljung_box(std::span<const double> series, int max_lag) {
  double n = static_cast<double>(series.size());
  AcfResult a = acf(series, max_lag);
  double q = 0;
  for (int l = 1; l <= max_lag; ++l) {
    double r = a.values[static_cast<size_t>(l - 1)];
    q += r * r / (n - l);
  }
  TestResult res;
  res.statistic = n * (n + 2.0) * q;
  res.p_value = chi_squared_sf(res.statistic, static_cast<double>(max_lag));
  res.reject_at_95 = res.p_value < 0.05;
  return res;
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> series) {
  size_t n = series.size();
  if (n < 2) throw std::invalid_argument("QQ plot needs at least 2 observations");
  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> pts;
  pts.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    double pos = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    pts.emplace_back(normal_quantile(pos), sorted[i]);
  }
  return pts;
}

double share_exceedance(const ArdlFit& fit) {
  if (fit.target != Target::MalShare)
    throw std::invalid_argument("share_exceedance applies to MalShare fits only");
  if (fit.fitted.empty()) throw std::invalid_argument("fit has no fitted values");
  size_t over = 0;
  for (double v : fit.fitted)
    if (v > 100.0) ++over;
  return 100.0 * static_cast<double>(over) / static_cast<double>(fit.fitted.size());
}

}  // namespace malseries
