#pragma once

#include <Eigen/Dense>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "malseries/series.hpp"

namespace malseries {

enum class Transform { LogPlusOne, Identity };
enum class Target { MalFreq, MalShare };
enum class Regressor { Eco, Adv, Art };

std::string_view to_string(Transform t);
std::string_view to_string(Target t);
std::string_view to_string(Regressor r);

double apply_transform(Transform t, double x);

/// Lag counts: p1 autoregressive lags of the response; p2/p3/p4 lags of
/// Eco/Adv/Art (each regressor also enters contemporaneously at lag 0).
struct ArdlOrders {
  int p1 = 1, p2 = 0, p3 = 0, p4 = 0;

  int max_lag() const;
  int parameter_count() const;  // 1 + p1 + (p2+1) + (p3+1) + (p4+1)
  bool operator==(const ArdlOrders&) const = default;
};

std::string to_string(const ArdlOrders& o);

struct ArdlFit {
  ArdlOrders orders;
  Transform transform = Transform::Identity;
  Target target = Target::MalShare;
  double alpha = 0;
  std::vector<double> beta;   // lags 1..p1 of the response
  std::vector<double> gamma;  // lags 0..p2 of Eco
  std::vector<double> phi;    // lags 0..p3 of Adv
  std::vector<double> rho;    // lags 0..p4 of Art
  Eigen::MatrixXd coef_covariance;  // layout [alpha, beta, gamma, phi, rho]
  std::vector<double> residuals;
  std::vector<double> fitted;
  double r_squared = 0;
  double sigma2 = 0;
  int dof = 0;
  double condition_number = 0;

  const std::vector<double>& regressor_coefs(Regressor r) const;
  /// Index of the regressor's lag-0 coefficient in the flat layout.
  int coef_offset(Regressor r) const;
  /// Index of beta_1 in the flat layout (1; alpha sits at 0).
  int beta_offset() const { return 1; }
  std::vector<double> flat_coefs() const;
};

class SingularDesignError : public std::runtime_error {
 public:
  SingularDesignError(const std::string& msg, int column)
      : std::runtime_error(msg), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

class UnitRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Response vector and design matrix for the lag regression. Row t (for t
/// from max_lag to T-1) is [1, f(y_{t-1}).., f(Eco_t).., f(Adv_t).., f(Art_t)..],
/// with the transform applied uniformly to response and regressors.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> build_design(const SeriesBundle& bundle,
                                                         Target target,
                                                         const ArdlOrders& orders,
                                                         Transform transform);

/// Generic least squares by column-pivoted QR. Coefficients, covariance
/// sigma2 (X'X)^-1, residuals/fitted, centered R^2.
struct OlsResult {
  Eigen::VectorXd coefs;
  Eigen::MatrixXd covariance;
  std::vector<double> residuals;
  std::vector<double> fitted;
  double r_squared = 0;
  double sigma2 = 0;
  int dof = 0;
  double condition_number = 0;
};

OlsResult fit_ols(const Eigen::VectorXd& response, const Eigen::MatrixXd& design);

/// build_design + fit_ols, with coefficients split into the model blocks.
ArdlFit fit_ardl(const SeriesBundle& bundle, Target target, const ArdlOrders& orders,
                 Transform transform);

/// Default transform for a target: ln(x+1) for MalFreq, identity for MalShare.
Transform default_transform(Target target);

struct MultiplierResult {
  Regressor regressor = Regressor::Eco;
  double value = 0;
  double std_error = 0;
  bool significant_95 = false;
};

/// Long-run multiplier: sum of the regressor's coefficients over
/// (1 - sum of autoregressive coefficients); standard error by the delta
/// method from the coefficient covariance.
MultiplierResult long_run_multiplier(const ArdlFit& fit, Regressor regressor);

/// Dynamic multipliers DM_0..DM_k: DM_0 = c_0,
/// DM_i = c_i + sum_j beta_j DM_{i-j}.
std::vector<double> dynamic_multipliers(const ArdlFit& fit, Regressor regressor,
                                        int horizon);

/// t-test of one coefficient (flat index) against zero at the given confidence.
bool coefficient_significant(const ArdlFit& fit, int flat_index,
                             double confidence = 0.95);

std::string fit_to_json(const ArdlFit& fit);

}  // namespace malseries
