#include "emarket/thresholds.hpp"

#include <sstream>

#include "emarket/numeric.hpp"

namespace emarket {

namespace {

constexpr double kBracketTol = 1e-12;

double physical_monopoly_profit(const MarketConfig& cfg) {
  const auto& d = cfg.demand;
  return profit(monopoly_price(cfg.c_p, d), cfg.c_p, d);
}

double virtual_monopoly_profit(double delta_c, const MarketConfig& cfg) {
  const auto& d = cfg.demand;
  const double c_v = cfg.c_p - delta_c;
  return profit(monopoly_price(c_v, d), c_v, d);
}

}  // namespace

double p_o_s_residual(double x, double lambda, const MarketConfig& cfg) {
  const double lhs =
      profit(x, cfg.c_p, cfg.demand) * (lambda / 2.0 + 1.0 - lambda);
  return lhs - physical_monopoly_profit(cfg) * (1.0 - lambda);
}

double p_o_s(double lambda, const MarketConfig& cfg) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ModelError(ErrorKind::out_of_range, "lambda must lie in (0, 1]");
  }
  const double hi = monopoly_price(cfg.c_p, cfg.demand);
  // Profit is increasing on [c_p, p̂_p], so the lower root is unique there.
  return bisect([&](double x) { return p_o_s_residual(x, lambda, cfg); },
                cfg.c_p, hi, kBracketTol);
}

double p_m_s_residual(double x, double lambda, double delta_c,
                      const MarketConfig& cfg) {
  const double pi_v = virtual_monopoly_profit(delta_c, cfg);
  const double pi_p = physical_monopoly_profit(cfg);
  const double compete =
      pi_v * (lambda / 3.0) +
      profit(x, cfg.c_p, cfg.demand) * (lambda / 3.0 + 1.0 - lambda);
  const double segment = pi_v * (lambda / 2.0) + pi_p * (1.0 - lambda);
  return compete - segment;
}

double p_m_s(double lambda, double delta_c, const MarketConfig& cfg) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ModelError(ErrorKind::out_of_range, "lambda must lie in (0, 1]");
  }
  const double crit = delta_c_crit(cfg);
  if (!(delta_c > 0.0 && delta_c < crit)) {
    std::ostringstream os;
    os << "p_m_s undefined: delta_c=" << delta_c
       << " outside (0, delta_c_crit=" << crit << ")";
    throw ModelError(ErrorKind::out_of_regime, os.str());
  }
  const double hi = monopoly_price(cfg.c_p, cfg.demand);
  return bisect(
      [&](double x) { return p_m_s_residual(x, lambda, delta_c, cfg); },
      cfg.c_p, hi, kBracketTol);
}

std::optional<double> p_m_s_if_defined(double lambda, double delta_c,
                                       const MarketConfig& cfg) {
  if (delta_c >= delta_c_crit(cfg)) return std::nullopt;
  return p_m_s(lambda, delta_c, cfg);
}

double delta_c_hat(double k, const MarketConfig& cfg) {
  if (!(k >= 1.0)) {
    throw ModelError(ErrorKind::out_of_range, "ratio k must be at least 1");
  }
  if (k == 1.0) return 0.0;
  if (monopoly_profit_ratio(cfg.c_p, cfg) <= k) return cfg.c_p;
  return bisect(
      [&](double dc) { return monopoly_profit_ratio(dc, cfg) - k; }, 0.0,
      cfg.c_p, kBracketTol);
}

double delta_c_crit(const MarketConfig& cfg) { return delta_c_hat(2.0, cfg); }

double lambda_hat(double r_p, const MarketConfig& cfg) {
  const double hi = monopoly_price(cfg.c_p, cfg.demand);
  if (!(r_p > cfg.c_p && r_p < hi)) {
    std::ostringstream os;
    os << "lambda_hat: r_p=" << r_p << " outside (c_p, p̂_p)=(" << cfg.c_p
       << ", " << hi << ")";
    throw ModelError(ErrorKind::out_of_range, os.str());
  }
  // p_o_s is decreasing in lambda, from p̂_p near 0 to c_p at 1.
  return bisect([&](double lam) { return p_o_s(lam, cfg) - r_p; }, 1e-15,
                1.0, kBracketTol);
}

ThresholdReport threshold_report(const MarketConfig& cfg,
                                 std::optional<double> r_p) {
  ThresholdReport rep;
  rep.p_o_s = p_o_s(cfg.lambda, cfg);
  rep.delta_c_crit = delta_c_crit(cfg);
  rep.delta_c_hat_32 = delta_c_hat(1.5, cfg);
  rep.p_m_s = p_m_s_if_defined(cfg.lambda, cfg.delta_c, cfg);
  if (r_p && *r_p > cfg.c_p && *r_p < monopoly_price(cfg.c_p, cfg.demand)) {
    rep.lambda_hat = lambda_hat(*r_p, cfg);
  }
  return rep;
}

}  // namespace emarket
