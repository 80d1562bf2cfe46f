#include "emarket/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace emarket {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_demand: return "degenerate_demand";
    case ErrorKind::invalid_config: return "invalid_config";
    case ErrorKind::out_of_regime: return "out_of_regime";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::no_acceptance: return "no_acceptance";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::search_assumption: return "search_assumption";
    case ErrorKind::profile_mismatch: return "profile_mismatch";
    case ErrorKind::symmetric_path: return "symmetric_path";
    case ErrorKind::ordering_violation: return "ordering_violation";
    case ErrorKind::scenario_inconsistency: return "scenario_inconsistency";
    case ErrorKind::parse_error: return "parse_error";
  }
  return "unknown";
}

std::string_view to_string(ShopId shop) {
  switch (shop) {
    case ShopId::vn: return "vn";
    case ShopId::vo: return "vo";
    case ShopId::p: return "p";
  }
  return "?";
}

std::string profile_label(OpeningProfile a) {
  return std::string{a.new_opens ? '1' : '0', a.old_opens ? '1' : '0'};
}

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw ModelError(ErrorKind::invalid_config, what);
}

}  // namespace

void validate(const MarketConfig& cfg) {
  const auto& d = cfg.demand;
  if (!(d.intercept > 0.0) || !(d.slope > 0.0)) {
    invalid("demand intercept and slope must be positive");
  }
  const double r = d.choke_price();
  if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0)) {
    invalid("lambda must lie in (0, 1]");
  }
  if (!(cfg.c_p > 0.0 && cfg.c_p < r)) invalid("c_p must lie in (0, r)");
  if (!(cfg.delta_c > 0.0 && cfg.delta_c <= cfg.c_p)) {
    invalid("delta_c must lie in (0, c_p]");
  }
  if (!(cfg.K >= 0.0)) invalid("K must be non-negative");
  if (!(cfg.sigma > 0.0)) invalid("sigma must be positive");
  if (!(cfg.delta_sigma > 0.0 && cfg.delta_sigma < cfg.sigma)) {
    invalid("delta_sigma must lie in (0, sigma)");
  }
  if (!(cfg.delta_delivery >= 0.0)) invalid("delta must be non-negative");
  if (!(cfg.e_loss >= 0.0 && cfg.e_loss <= 1.0)) {
    invalid("e must lie in [0, 1]");
  }
  // The physical shop must be able to charge the virtual monopoly price
  // without losses even at the largest cost reduction.
  if (!(cfg.c_p < monopoly_price(0.0, d))) {
    std::ostringstream os;
    os << "c_p must be below the zero-cost monopoly price "
       << monopoly_price(0.0, d);
    invalid(os.str());
  }
}

double demand(double p, const DemandSpec& d) {
  return std::max(0.0, d.intercept - d.slope * p);
}

double profit(double p, double c, const DemandSpec& d) {
  return (p - c) * demand(p, d);
}

double monopoly_price(double c, const DemandSpec& d) {
  const double r = d.choke_price();
  if (c >= r) {
    throw ModelError(ErrorKind::degenerate_demand,
                     "marginal cost at or above the choke price");
  }
  return 0.5 * (r + c);
}

double surplus(double p, const DemandSpec& d) {
  const double q = d.intercept - d.slope * p;
  if (q <= 0.0) return 0.0;
  return q * q / (2.0 * d.slope);
}

double surplus_inverse(double s, const DemandSpec& d) {
  if (s <= 0.0) return d.choke_price();
  if (s > surplus(0.0, d) * (1.0 + 1e-15)) {
    throw ModelError(ErrorKind::no_acceptance,
                     "required surplus exceeds the surplus at a zero price");
  }
  const double p = (d.intercept - std::sqrt(2.0 * d.slope * s)) / d.slope;
  return std::max(p, 0.0);
}

double unit_cost(ShopId shop, const MarketConfig& cfg) {
  switch (shop) {
    case ShopId::vn: return cfg.c_v();
    case ShopId::vo: return cfg.c_vo();
    case ShopId::p: return cfg.c_p;
  }
  return cfg.c_p;
}

double purchase_cost(ShopId shop, const MarketConfig& cfg) {
  return shop == ShopId::p ? cfg.sigma : cfg.delta_delivery;
}

double monopoly_profit_ratio(double delta_c, const MarketConfig& cfg) {
  const auto& d = cfg.demand;
  const double c_v = cfg.c_p - delta_c;
  const double virt = profit(monopoly_price(c_v, d), c_v, d);
  const double phys = profit(monopoly_price(cfg.c_p, d), cfg.c_p, d);
  return virt / phys;
}

double surplus_gap(const MarketConfig& cfg) {
  const auto& d = cfg.demand;
  return surplus(monopoly_price(cfg.c_v(), d), d) -
         surplus(monopoly_price(cfg.c_p, d), d);
}

}  // namespace emarket
