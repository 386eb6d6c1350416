#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "malseries/ardl.hpp"

namespace malseries {

struct CandidateTrace {
  int step = 0;  // 1, 2 or 3 of the selection procedure
  ArdlOrders orders;
  bool autocorr_detected = false;
  bool top_lag_significant = false;
  bool accepted = false;
  double max_abs_acf = 0;
  double acf_band = 0;
  // t-statistics of the top-lag coefficients gamma_{p2}, phi_{p3}, rho_{p4}.
  std::array<double, 3> top_lag_t{0, 0, 0};
};

struct SelectionTrace {
  std::vector<CandidateTrace> candidates;
  ArdlOrders final;
};

class SelectionFailure : public std::runtime_error {
 public:
  SelectionFailure(const std::string& msg, SelectionTrace trace)
      : std::runtime_error(msg), trace_(std::move(trace)) {}
  const SelectionTrace& trace() const { return trace_; }

 private:
  SelectionTrace trace_;
};

/// True iff any sample autocorrelation at lags 1..floor(10 log10 n) leaves
/// the +-z/sqrt(n) band. Zero-variance residuals count as no autocorrelation.
bool autocorr_present(std::span<const double> residuals, double confidence = 0.95);

/// Three-step lag-order selection. Step 1 grows all four orders together from
/// 1 until the residual ACF stays inside the band. Step 2 shrinks p2 = p3 = p4
/// together, step 3 shrinks p4, p3, then p2 individually; a step-down is
/// rejected when the lower candidate shows autocorrelation or a significant
/// top-lag coefficient for an order being decreased.
std::pair<ArdlOrders, SelectionTrace> select_orders(const SeriesBundle& bundle,
                                                    Target target, Transform transform,
                                                    int p_max);

/// One JSON object per candidate, newline separated.
std::string trace_to_jsonl(const SelectionTrace& trace);

}  // namespace malseries
