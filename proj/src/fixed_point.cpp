#include "emarket/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace emarket {

namespace {

using Prices = PerShop<std::optional<double>>;

double max_abs_diff(const Prices& a, const Prices& b) {
  double diff = 0.0;
  for (ShopId shop : kAllShops) {
    if (a[shop] && b[shop]) {
      diff = std::max(diff, std::abs(*a[shop] - *b[shop]));
    } else if (a[shop].has_value() != b[shop].has_value()) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return diff;
}

template <typename PriceOf>
Prices guess(OpeningProfile a, PriceOf&& price_of) {
  Prices p;
  for (ShopId shop : kAllShops) {
    if (a.has(shop)) p[shop] = price_of(shop);
  }
  return p;
}

std::vector<Prices> initial_guesses(OpeningProfile a, const MarketConfig& cfg) {
  const auto& d = cfg.demand;
  const double r = d.choke_price();
  return {
      guess(a, [&](ShopId s) { return monopoly_price(unit_cost(s, cfg), d); }),
      guess(a, [&](ShopId) { return r; }),
      guess(a, [&](ShopId s) { return unit_cost(s, cfg); }),
      guess(a, [&](ShopId s) { return 0.5 * (unit_cost(s, cfg) + r); }),
  };
}

std::vector<OrderingCheck> ordering_checks(const FixedPointResult& fp,
                                           const MarketConfig& cfg) {
  const auto& eq = fp.equilibrium;
  const auto& res = fp.reservations;
  const OpeningProfile a = eq.profile;
  std::vector<OrderingCheck> checks;
  if (!a.any_virtual()) return checks;

  const double sigma = cfg.sigma;
  const double ds = cfg.delta_sigma;
  const double d = cfg.delta_delivery;
  const double r_p = res.at(ShopId::p);

  OrderingCheck virt_below_rp{"virtual prices below r_p", ds < d, true};
  for (ShopId s : {ShopId::vn, ShopId::vo}) {
    if (a.has(s)) virt_below_rp.holds &= eq.price(s) < r_p;
  }
  checks.push_back(virt_below_rp);

  // With both virtual shops open and the physical shop serving only old
  // consumers, the lowest-price requirement is carried by the virtual shops.
  // When it competes, the three-shop rule gives S(r_v) = S(p_v) - 1.5 (σ - Δσ),
  // so the bound on δ tightens to (3σ - Δσ) / 2.
  const bool both = a.new_opens && a.old_opens;
  const bool physical_relevant = !both || eq.regime == Regime::competing;
  const double d_bound = both ? 0.5 * (3.0 * sigma - ds) : 2.0 * sigma - ds;
  OrderingCheck phys_below_rv{"physical price below virtual reservations",
                              d < d_bound && physical_relevant, true};
  for (ShopId s : {ShopId::vn, ShopId::vo}) {
    if (a.has(s)) phys_below_rv.holds &= eq.price(ShopId::p) < res.at(s);
  }
  checks.push_back(phys_below_rv);

  OrderingCheck rp_below_monopoly{
      "r_p below physical monopoly price", d < surplus_gap(cfg) + ds,
      r_p < monopoly_price(cfg.c_p, cfg.demand)};
  checks.push_back(rp_below_monopoly);
  return checks;
}

}  // namespace

FixedPointResult solve_fixed_point_from(OpeningProfile a,
                                        const MarketConfig& cfg,
                                        const SolveOptions& opts,
                                        const Prices& initial_prices) {
  FixedPointResult out;
  const PricingThresholds thresholds = PricingThresholds::compute(cfg);
  if (!a.any_virtual()) {
    out.reservations.profile = a;
    out.equilibrium =
        price_equilibrium(a, out.reservations, cfg, thresholds, opts.vo_rule);
    return out;
  }

  auto best_response = [&](const ReservationSet& res) {
    return price_equilibrium(a, res, cfg, thresholds, opts.vo_rule);
  };

  Prices p = initial_prices;
  ReservationSet res = compute_reservations(a, p, cfg);
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const PriceEquilibrium eq = best_response(res);
    Prices next;
    for (ShopId shop : kAllShops) {
      if (!a.has(shop)) continue;
      next[shop] = (1.0 - opts.damping) * *p[shop] +
                   opts.damping * eq.price(shop);
    }
    const double dp = max_abs_diff(next, p);
    p = next;
    ReservationSet next_res = compute_reservations(a, p, cfg);
    const double dr = max_abs_diff(next_res.r, res.r);
    res = std::move(next_res);
    if (dp < opts.tolerance && dr < opts.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "fixed point for profile " << profile_label(a)
       << " did not converge after " << opts.max_iterations << " iterations";
    throw ModelError(ErrorKind::non_convergence, os.str());
  }

  // Undamped polish so regime rules hold exactly (e.g. p_p == r_p).
  PriceEquilibrium eq = best_response(res);
  for (int polish = 0; polish < 100; ++polish) {
    ReservationSet polished = compute_reservations(a, eq.prices, cfg);
    PriceEquilibrium next = best_response(polished);
    const double change = max_abs_diff(next.prices, eq.prices);
    res = std::move(polished);
    eq = std::move(next);
    if (change <= 1e-15) break;
  }
  const double gap = max_abs_diff(eq.prices, p);
  if (gap > 1e-8) {
    std::ostringstream os;
    os << "fixed point for profile " << profile_label(a)
       << " is not self-consistent (gap " << gap << ")";
    throw ModelError(ErrorKind::non_convergence, os.str());
  }

  if (eq.alpha < 1) {
    throw ModelError(ErrorKind::search_assumption,
                     "no offer is acceptable to new consumers in profile " +
                         profile_label(a));
  }
  out.reservations = std::move(res);
  out.equilibrium = std::move(eq);
  out.iterations = it + 1;
  return out;
}

FixedPointResult solve_fixed_point(OpeningProfile a, const MarketConfig& cfg,
                                   bool info_goods) {
  SolveOptions opts;
  opts.info_goods = info_goods;
  return solve_fixed_point(a, cfg, opts);
}

FixedPointResult solve_fixed_point(OpeningProfile a, const MarketConfig& cfg,
                                   const SolveOptions& opts) {
  if (opts.info_goods && cfg.delta_delivery != 0.0) {
    throw ModelError(ErrorKind::invalid_config,
                     "information-goods mode requires delta == 0");
  }
  std::vector<FixedPointResult> found;
  std::string last_error;
  for (const Prices& start : initial_guesses(a, cfg)) {
    try {
      found.push_back(solve_fixed_point_from(a, cfg, opts, start));
    } catch (const ModelError& e) {
      if (e.kind() != ErrorKind::non_convergence) throw;
      last_error = e.what();
    }
    if (!a.any_virtual()) break;
  }
  if (found.empty()) throw ModelError(ErrorKind::non_convergence, last_error);

  FixedPointResult primary = std::move(found.front());
  std::vector<Prices> distinct{primary.equilibrium.prices};
  for (std::size_t i = 1; i < found.size(); ++i) {
    const auto& prices = found[i].equilibrium.prices;
    const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                  [&](const Prices& q) {
                                    return max_abs_diff(q, prices) <= 1e-8;
                                  });
    if (!seen) distinct.push_back(prices);
  }
  primary.distinct_fixed_points = static_cast<int>(distinct.size());

  try {
    check_search_assumption(primary.equilibrium, primary.reservations,
                            opts.info_goods);
    if (opts.info_goods) check_info_goods_ordering(primary.equilibrium);
  } catch (const ModelError& e) {
    if (opts.enforce_search_assumption) throw;
    primary.warnings.push_back(e.what());
  }
  primary.orderings = ordering_checks(primary, cfg);
  return primary;
}

}  // namespace emarket
