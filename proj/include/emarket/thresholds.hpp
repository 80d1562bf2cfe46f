#pragma once

#include <optional>

#include "emarket/model.hpp"

namespace emarket {

/// Regime thresholds of the physical shop's pricing problem.
struct ThresholdReport {
  /// Reservation price at which the old firm, without a virtual shop, is
  /// indifferent between competing for new consumers and serving only old
  /// ones.
  double p_o_s = 0.0;
  /// Same indifference when the old firm also runs a virtual shop; only
  /// defined while delta_c < delta_c_crit.
  std::optional<double> p_m_s;
  /// Cost reduction at which the virtual/physical monopoly profit ratio
  /// reaches 2 (c_p when it never does).
  double delta_c_crit = 0.0;
  /// Cost reduction at which the ratio reaches 3/2.
  double delta_c_hat_32 = 0.0;
  /// Access share at which p_o_s equals the supplied reservation price.
  std::optional<double> lambda_hat;
};

/// Solves profit(x)[λ/2 + 1 - λ] = profit(p̂_p)(1 - λ) for x in [c_p, p̂_p].
double p_o_s(double lambda, const MarketConfig& cfg);

/// Solves the three-shop indifference for x in (c_p, p̂_p). Throws
/// out_of_regime when delta_c >= delta_c_crit.
double p_m_s(double lambda, double delta_c, const MarketConfig& cfg);

double delta_c_crit(const MarketConfig& cfg);

/// Cost reduction where monopoly_profit_ratio == k, clamped to (0, c_p].
double delta_c_hat(double k, const MarketConfig& cfg);

/// Inverse of p_o_s in lambda. Throws out_of_range unless
/// r_p lies in (c_p, p̂_p).
double lambda_hat(double r_p, const MarketConfig& cfg);

/// Residuals of the defining indifference equations (value at the root
/// should be ~0).
double p_o_s_residual(double x, double lambda, const MarketConfig& cfg);
double p_m_s_residual(double x, double lambda, double delta_c,
                      const MarketConfig& cfg);

/// p_m_s when defined, nullopt otherwise.
std::optional<double> p_m_s_if_defined(double lambda, double delta_c,
                                       const MarketConfig& cfg);

ThresholdReport threshold_report(const MarketConfig& cfg,
                                 std::optional<double> r_p = std::nullopt);

}  // namespace emarket
