#include "malseries/ardl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "malseries/stats.hpp"

namespace malseries {

std::string_view to_string(Transform t) {
  return t == Transform::LogPlusOne ? "log1p" : "identity";
}

std::string_view to_string(Target t) {
  return t == Target::MalFreq ? "mal_freq" : "mal_share";
}

std::string_view to_string(Regressor r) {
  switch (r) {
    case Regressor::Eco: return "eco";
    case Regressor::Adv: return "adv";
    case Regressor::Art: return "art";
  }
  return "?";
}

double apply_transform(Transform t, double x) {
  return t == Transform::LogPlusOne ? std::log1p(x) : x;
}

int ArdlOrders::max_lag() const { return std::max({p1, p2, p3, p4}); }

int ArdlOrders::parameter_count() const { return 1 + p1 + (p2 + 1) + (p3 + 1) + (p4 + 1); }

std::string to_string(const ArdlOrders& o) {
  return "(" + std::to_string(o.p1) + "," + std::to_string(o.p2) + "," +
         std::to_string(o.p3) + "," + std::to_string(o.p4) + ")";
}

const std::vector<double>& ArdlFit::regressor_coefs(Regressor r) const {
  switch (r) {
    case Regressor::Eco: return gamma;
    case Regressor::Adv: return phi;
    case Regressor::Art: return rho;
  }
  throw std::logic_error("unreachable");
}

int ArdlFit::coef_offset(Regressor r) const {
  int off = 1 + orders.p1;
  if (r == Regressor::Eco) return off;
  off += orders.p2 + 1;
  if (r == Regressor::Adv) return off;
  return off + orders.p3 + 1;
}

std::vector<double> ArdlFit::flat_coefs() const {
  std::vector<double> out;
  out.push_back(alpha);
  out.insert(out.end(), beta.begin(), beta.end());
  out.insert(out.end(), gamma.begin(), gamma.end());
  out.insert(out.end(), phi.begin(), phi.end());
  out.insert(out.end(), rho.begin(), rho.end());
  return out;
}

namespace {

std::vector<double> transformed(Transform f, std::span<const long long> x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    out[i] = apply_transform(f, static_cast<double>(x[i]));
  return out;
}

std::vector<double> transformed(Transform f, std::span<const double> x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = apply_transform(f, x[i]);
  return out;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::MatrixXd> build_design(const SeriesBundle& bundle,
                                                         Target target,
                                                         const ArdlOrders& orders,
                                                         Transform f) {
  if (orders.p1 < 0 || orders.p2 < 0 || orders.p3 < 0 || orders.p4 < 0)
    throw std::invalid_argument("negative lag order");

  std::vector<double> y = target == Target::MalFreq
                              ? transformed(f, std::span<const long long>(bundle.mal_freq))
                              : transformed(f, std::span<const double>(bundle.mal_share));
  std::vector<double> eco = transformed(f, std::span<const long long>(bundle.eco));
  std::vector<double> adv = transformed(f, std::span<const long long>(bundle.adv));
  std::vector<double> art = transformed(f, std::span<const long long>(bundle.art));

  long T = static_cast<long>(bundle.size());
  int maxlag = orders.max_lag();
  long rows = T - maxlag;
  int cols = orders.parameter_count();
  if (rows < cols + 1)
    throw std::invalid_argument("insufficient observations for orders " +
                                to_string(orders) + ": T=" + std::to_string(T));

  Eigen::VectorXd response(rows);
  Eigen::MatrixXd design(rows, cols);
  for (long i = 0; i < rows; ++i) {
    long t = maxlag + i;
    response(i) = y[static_cast<size_t>(t)];
    int c = 0;
    design(i, c++) = 1.0;
    for (int j = 1; j <= orders.p1; ++j) design(i, c++) = y[static_cast<size_t>(t - j)];
    for (int j = 0; j <= orders.p2; ++j) design(i, c++) = eco[static_cast<size_t>(t - j)];
    for (int j = 0; j <= orders.p3; ++j) design(i, c++) = adv[static_cast<size_t>(t - j)];
    for (int j = 0; j <= orders.p4; ++j) design(i, c++) = art[static_cast<size_t>(t - j)];
  }
  return {std::move(response), std::move(design)};
}

OlsResult fit_ols(const Eigen::VectorXd& response, const Eigen::MatrixXd& design) {
  const long n = design.rows();
  const long k = design.cols();
  if (response.size() != n) throw std::invalid_argument("response/design size mismatch");
  if (n < k + 1) throw std::invalid_argument("need more rows than columns");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    int bad = static_cast<int>(qr.colsPermutation().indices()(qr.rank()));
    throw SingularDesignError(
        "design matrix is rank-deficient at column " + std::to_string(bad), bad);
  }

  OlsResult res;
  res.coefs = qr.solve(response);
  res.dof = static_cast<int>(n - k);
  if (res.dof <= 0) throw std::invalid_argument("non-positive degrees of freedom");

  Eigen::VectorXd fitted = design * res.coefs;
  Eigen::VectorXd resid = response - fitted;
  double rss = resid.squaredNorm();
  double ymean = response.mean();
  double tss = (response.array() - ymean).matrix().squaredNorm();
  res.sigma2 = rss / static_cast<double>(res.dof);
  res.r_squared = tss > 0 ? 1.0 - rss / tss : 1.0;

  // sigma2 (X'X)^-1 via the R factor: X P = Q R, so (X'X)^-1 = P R^-1 R^-T P'.
  Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd core = rinv * rinv.transpose();
  const auto& perm = qr.colsPermutation();
  res.covariance = res.sigma2 * (perm * core * perm.transpose());

  double diag_max = 0, diag_min = std::numeric_limits<double>::infinity();
  for (long i = 0; i < k; ++i) {
    double d = std::abs(r(i, i));
    diag_max = std::max(diag_max, d);
    diag_min = std::min(diag_min, d);
  }
  res.condition_number = diag_min > 0 ? diag_max / diag_min
                                      : std::numeric_limits<double>::infinity();

  res.fitted.assign(fitted.data(), fitted.data() + n);
  res.residuals.assign(resid.data(), resid.data() + n);
  return res;
}

ArdlFit fit_ardl(const SeriesBundle& bundle, Target target, const ArdlOrders& orders,
                 Transform transform) {
  auto [y, X] = build_design(bundle, target, orders, transform);
  OlsResult ols = fit_ols(y, X);

  ArdlFit fit;
  fit.orders = orders;
  fit.transform = transform;
  fit.target = target;
  int c = 0;
  fit.alpha = ols.coefs(c++);
  for (int j = 0; j < orders.p1; ++j) fit.beta.push_back(ols.coefs(c++));
  for (int j = 0; j <= orders.p2; ++j) fit.gamma.push_back(ols.coefs(c++));
  for (int j = 0; j <= orders.p3; ++j) fit.phi.push_back(ols.coefs(c++));
  for (int j = 0; j <= orders.p4; ++j) fit.rho.push_back(ols.coefs(c++));
  fit.coef_covariance = std::move(ols.covariance);
  fit.residuals = std::move(ols.residuals);
  fit.fitted = std::move(ols.fitted);
  fit.r_squared = ols.r_squared;
  fit.sigma2 = ols.sigma2;
  fit.dof = ols.dof;
  fit.condition_number = ols.condition_number;
  return fit;
}

Transform default_transform(Target target) {
  return target == Target::MalFreq ? Transform::LogPlusOne : Transform::Identity;
}

MultiplierResult long_run_multiplier(const ArdlFit& fit, Regressor regressor) {
  const auto& coefs = fit.regressor_coefs(regressor);
  double beta_sum = 0;
  for (double b : fit.beta) beta_sum += b;
  double denom = 1.0 - beta_sum;
  if (std::abs(denom) < 1e-10)
    throw UnitRootError("long-run multiplier undefined: 1 - sum(beta) is zero");
  double coef_sum = 0;
  for (double ci : coefs) coef_sum += ci;

  MultiplierResult res;
  res.regressor = regressor;
  res.value = coef_sum / denom;

  long m = fit.coef_covariance.rows();
  if (m > 0) {
    // Delta method: d/d beta_j = S_c / denom^2, d/d c_j = 1 / denom.
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(m);
    double d_beta = coef_sum / (denom * denom);
    for (size_t j = 0; j < fit.beta.size(); ++j)
      grad(fit.beta_offset() + static_cast<long>(j)) = d_beta;
    int off = fit.coef_offset(regressor);
    for (size_t j = 0; j < coefs.size(); ++j) grad(off + static_cast<long>(j)) = 1.0 / denom;
    double var = grad.dot(fit.coef_covariance * grad);
    res.std_error = var > 0 ? std::sqrt(var) : 0.0;
  }

  if (res.std_error > 0) {
    double crit = fit.dof > 0 ? student_t_two_sided_critical(0.95, fit.dof)
                              : normal_two_sided_critical(0.95);
    res.significant_95 = std::abs(res.value) / res.std_error > crit;
  }
  return res;
}

std::vector<double> dynamic_multipliers(const ArdlFit& fit, Regressor regressor,
                                        int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const auto& c = fit.regressor_coefs(regressor);
  std::vector<double> dm(static_cast<size_t>(horizon) + 1, 0.0);
  for (int i = 0; i <= horizon; ++i) {
    double v = static_cast<size_t>(i) < c.size() ? c[static_cast<size_t>(i)] : 0.0;
    int pmax = std::min<int>(i, static_cast<int>(fit.beta.size()));
    for (int j = 1; j <= pmax; ++j)
      v += fit.beta[static_cast<size_t>(j - 1)] * dm[static_cast<size_t>(i - j)];
    dm[static_cast<size_t>(i)] = v;
  }
  return dm;
}

bool coefficient_significant(const ArdlFit& fit, int flat_index, double confidence) {
  double var = fit.coef_covariance(flat_index, flat_index);
  if (!(var > 0)) return false;
  double coef = fit.flat_coefs()[static_cast<size_t>(flat_index)];
  double t = std::abs(coef) / std::sqrt(var);
  double crit = fit.dof > 0 ? student_t_two_sided_critical(confidence, fit.dof)
                            : normal_two_sided_critical(confidence);
  return t > crit;
}

std::string fit_to_json(const ArdlFit& fit) {
  nlohmann::ordered_json j;
  j["orders"] = {fit.orders.p1, fit.orders.p2, fit.orders.p3, fit.orders.p4};
  j["transform"] = std::string(to_string(fit.transform));
  j["target"] = std::string(to_string(fit.target));

  auto flat = fit.flat_coefs();
  std::vector<std::string> names;
  names.emplace_back("alpha");
  for (int i = 1; i <= fit.orders.p1; ++i) names.push_back("beta_" + std::to_string(i));
  for (int i = 0; i <= fit.orders.p2; ++i) names.push_back("gamma_" + std::to_string(i));
  for (int i = 0; i <= fit.orders.p3; ++i) names.push_back("phi_" + std::to_string(i));
  for (int i = 0; i <= fit.orders.p4; ++i) names.push_back("rho_" + std::to_string(i));

  nlohmann::ordered_json coefs = nlohmann::ordered_json::array();
  for (size_t i = 0; i < flat.size(); ++i) {
    double se = fit.coef_covariance.size() > 0 &&
                        fit.coef_covariance(static_cast<long>(i), static_cast<long>(i)) > 0
                    ? std::sqrt(fit.coef_covariance(static_cast<long>(i),
                                                    static_cast<long>(i)))
                    : 0.0;
    coefs.push_back({{"name", names[i]}, {"value", flat[i]}, {"std_error", se}});
  }
  j["coefficients"] = std::move(coefs);
  j["r_squared"] = fit.r_squared;
  j["sigma2"] = fit.sigma2;
  j["dof"] = fit.dof;
  j["condition_number"] = fit.condition_number;
  return j.dump(2);
}

}  // namespace malseries
