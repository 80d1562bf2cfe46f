#pragma once

#include <string>
#include <vector>

#include "emarket/model.hpp"
#include "emarket/pricing.hpp"
#include "emarket/search.hpp"

namespace emarket {

struct SolveOptions {
  bool info_goods = false;
  VoPricingRule vo_rule = VoPricingRule::reservation_capped;
  double damping = 0.5;
  int max_iterations = 10'000;
  double tolerance = 1e-10;
  /// When false, search-assumption and ordering violations are recorded as
  /// warnings instead of thrown.
  bool enforce_search_assumption = true;
};

/// An ordering between prices and reservation prices that holds whenever
/// its parameter restriction does.
struct OrderingCheck {
  std::string name;
  bool applicable = false;
  bool holds = false;
};

struct FixedPointResult {
  ReservationSet reservations;
  PriceEquilibrium equilibrium;
  int iterations = 0;
  /// Distinct fixed points reached from the initial-guess sweep.
  int distinct_fixed_points = 1;
  std::vector<OrderingCheck> orderings;
  std::vector<std::string> warnings;
};

/// Rational-expectations equilibrium of one stage-2 subgame: consumers'
/// reservation prices are computed against equilibrium prices and firms
/// best-respond to those reservations. Runs a damped iteration from four
/// initial guesses (monopoly, choke, marginal-cost, midpoint prices).
/// Throws non_convergence or search_assumption.
FixedPointResult solve_fixed_point(OpeningProfile a, const MarketConfig& cfg,
                                   bool info_goods);
FixedPointResult solve_fixed_point(OpeningProfile a, const MarketConfig& cfg,
                                   const SolveOptions& opts);

/// Single run from a given price guess (one value per open shop).
FixedPointResult solve_fixed_point_from(
    OpeningProfile a, const MarketConfig& cfg, const SolveOptions& opts,
    const PerShop<std::optional<double>>& initial_prices);

}  // namespace emarket
