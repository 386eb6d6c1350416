#include "malseries/selection.hpp"

#include <cmath>

#include <json.hpp>

#include "malseries/diagnostics.hpp"
#include "malseries/stats.hpp"

namespace malseries {

bool autocorr_present(std::span<const double> residuals, double confidence) {
  size_t n = residuals.size();
  if (n < 8) throw std::invalid_argument("need at least 8 residuals");
  if (variance(residuals) <= 0) return false;
  AcfResult a = acf(residuals, default_acf_max_lag(n), confidence);
  for (double v : a.values)
    if (std::abs(v) > a.band) return true;
  return false;
}

namespace {

struct Candidate {
  ArdlFit fit;
  CandidateTrace trace;
};

Candidate evaluate(const SeriesBundle& bundle, Target target, Transform transform,
                   const ArdlOrders& orders, int step) {
  Candidate c;
  c.fit = fit_ardl(bundle, target, orders, transform);
  c.trace.step = step;
  c.trace.orders = orders;

  const auto& res = c.fit.residuals;
  if (variance(res) > 0) {
    AcfResult a = acf(res, default_acf_max_lag(res.size()));
    c.trace.acf_band = a.band;
    for (double v : a.values)
      c.trace.max_abs_acf = std::max(c.trace.max_abs_acf, std::abs(v));
    c.trace.autocorr_detected = c.trace.max_abs_acf > a.band;
  }

  auto flat = c.fit.flat_coefs();
  const int top_idx[3] = {
      1 + orders.p1 + orders.p2,
      1 + orders.p1 + orders.p2 + 1 + orders.p3,
      1 + orders.p1 + orders.p2 + 1 + orders.p3 + 1 + orders.p4,
  };
  for (int i = 0; i < 3; ++i) {
    double var = c.fit.coef_covariance(top_idx[i], top_idx[i]);
    c.trace.top_lag_t[static_cast<size_t>(i)] =
        var > 0 ? flat[static_cast<size_t>(top_idx[i])] / std::sqrt(var) : 0.0;
  }
  return c;
}

bool top_lag_significant(const Candidate& c, int which, double crit) {
  return std::abs(c.trace.top_lag_t[static_cast<size_t>(which)]) > crit;
}

double critical_for(const Candidate& c) {
  return c.fit.dof > 0 ? student_t_two_sided_critical(0.95, c.fit.dof)
                       : normal_two_sided_critical(0.95);
}

}  // namespace

std::pair<ArdlOrders, SelectionTrace> select_orders(const SeriesBundle& bundle,
                                                    Target target, Transform transform,
                                                    int p_max) {
  if (p_max < 1) throw std::invalid_argument("p_max must be >= 1");

  SelectionTrace trace;
  Candidate current;

  // Step 1: grow all orders together until the residual ACF is clean.
  bool found = false;
  for (int p = 1; p <= p_max; ++p) {
    ArdlOrders orders{p, p, p, p};
    Candidate c;
    try {
      c = evaluate(bundle, target, transform, orders, 1);
    } catch (const std::exception& e) {
      throw SelectionFailure("order selection failed at " + to_string(orders) + ": " +
                                 e.what(),
                             trace);
    }
    trace.candidates.push_back(c.trace);
    if (!c.trace.autocorr_detected) {
      current = std::move(c);
      found = true;
      break;
    }
  }
  if (!found)
    throw SelectionFailure("no candidate up to p_max=" + std::to_string(p_max) +
                               " has a clean residual ACF",
                           trace);

  // Step 2: shrink p2 = p3 = p4 together while the lower candidate stays
  // clean and its top-lag coefficients stay insignificant.
  while (current.fit.orders.p2 > 0) {
    ArdlOrders lower = current.fit.orders;
    --lower.p2;
    --lower.p3;
    --lower.p4;
    Candidate c;
    bool violated;
    try {
      c = evaluate(bundle, target, transform, lower, 2);
      double crit = critical_for(c);
      c.trace.top_lag_significant = top_lag_significant(c, 0, crit) ||
                                    top_lag_significant(c, 1, crit) ||
                                    top_lag_significant(c, 2, crit);
      violated = c.trace.autocorr_detected || c.trace.top_lag_significant;
      trace.candidates.push_back(c.trace);
    } catch (const SingularDesignError&) {
      violated = true;
    }
    if (violated) break;
    current = std::move(c);
  }

  // Step 3: shrink p4, p3, p2 individually with the same stop criterion.
  for (int which : {2, 1, 0}) {
    auto order_of = [&](ArdlOrders& o) -> int& {
      return which == 0 ? o.p2 : which == 1 ? o.p3 : o.p4;
    };
    while (true) {
      ArdlOrders lower = current.fit.orders;
      int& ord = order_of(lower);
      if (ord == 0) break;
      --ord;
      Candidate c;
      bool violated;
      try {
        c = evaluate(bundle, target, transform, lower, 3);
        c.trace.top_lag_significant = top_lag_significant(c, which, critical_for(c));
        violated = c.trace.autocorr_detected || c.trace.top_lag_significant;
        trace.candidates.push_back(c.trace);
      } catch (const SingularDesignError&) {
        violated = true;
      }
      if (violated) break;
      current = std::move(c);
    }
  }

  trace.final = current.fit.orders;
  // Mark the last trace entry matching the final orders as accepted.
  for (auto it = trace.candidates.rbegin(); it != trace.candidates.rend(); ++it) {
    if (it->orders == trace.final) {
      it->accepted = true;
      break;
    }
  }
  return {trace.final, trace};
}

std::string trace_to_jsonl(const SelectionTrace& trace) {
  std::string out;
  for (const auto& c : trace.candidates) {
    nlohmann::ordered_json j;
    j["step"] = c.step;
    j["orders"] = {c.orders.p1, c.orders.p2, c.orders.p3, c.orders.p4};
    j["max_abs_acf"] = c.max_abs_acf;
    j["acf_band"] = c.acf_band;
    j["autocorr_detected"] = c.autocorr_detected;
    j["top_lag_t"] = {c.top_lag_t[0], c.top_lag_t[1], c.top_lag_t[2]};
    j["top_lag_significant"] = c.top_lag_significant;
    j["accepted"] = c.accepted;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace malseries
