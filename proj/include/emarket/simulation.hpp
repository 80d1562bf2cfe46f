#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "emarket/model.hpp"
#include "emarket/pricing.hpp"
#include "emarket/search.hpp"

namespace emarket {

struct SimConfig {
  std::int64_t n_agents = 100'000;
  std::uint64_t seed = 1;
  /// 0 picks the hardware concurrency. Output does not depend on it.
  unsigned workers = 0;
  MarketConfig market{};
  PriceEquilibrium equilibrium{};
  ReservationSet reservations{};
};

struct SurplusStats {
  double mean = 0.0;
  double min = 0.0;
};

struct SimReport {
  std::int64_t n_agents = 0;
  std::int64_t n_new = 0;
  std::int64_t n_old = 0;
  std::uint64_t seed = 0;
  std::string rng;
  std::string lambda_rounding;

  PerShop<std::int64_t> new_buyers{};
  PerShop<std::int64_t> old_buyers{};
  PerShop<double> empirical_shares{};
  PerShop<double> analytic_shares{};
  /// Standardised deviation of new-consumer purchases from the analytic
  /// new-consumer split; open shops only.
  PerShop<std::optional<double>> share_z_scores{};

  double mean_search_steps = 0.0;
  int max_search_steps = 0;
  /// Upper bound on search steps: sites - acceptable shops + 1.
  int search_steps_bound = 0;
  /// Mean steps of new consumers whose first visit was each shop.
  PerShop<std::optional<double>> mean_steps_by_first_shop{};

  SurplusStats new_surplus;
  SurplusStats old_surplus;
  double max_expenditure = 0.0;
  double expenditure_bound = 0.0;
};

/// Agent-level simulation of random sequential search with recall. New
/// consumers visit the open Web sites in a uniformly random order and stop as
/// soon as the best offer held beats the reservation price against the
/// sites still unvisited; at the last site they take the best offer. Old
/// consumers buy at the physical shop. Throws scenario_inconsistency if a
/// consumer ends with no acceptable offer.
SimReport simulate(const SimConfig& sim);

}  // namespace emarket
