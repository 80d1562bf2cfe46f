#pragma once

#include <optional>
#include <string_view>

#include "emarket/model.hpp"
#include "emarket/search.hpp"

namespace emarket {

enum class Regime { monopoly, competing, segmentation };

std::string_view to_string(Regime regime);

/// How the old firm's virtual shop prices when its cost exceeds the new
/// firm's (efficiency loss e > 0, both firms open).
enum class VoPricingRule {
  /// min{r_vo, p̂_vo}: the monopoly price capped by the reservation price.
  reservation_capped,
  /// min{c_vo, p̂_vo} taken literally (charges marginal cost).
  literal_marginal_cost,
};

/// Stage-2 outcome for one opening profile.
struct PriceEquilibrium {
  OpeningProfile profile{};
  Regime regime = Regime::monopoly;
  PerShop<std::optional<double>> prices{};
  /// Number of shops whose price new consumers accept.
  int alpha = 1;
  /// Fraction of the unit consumer mass buying at each shop (0 if closed).
  PerShop<double> shares{};
  PerShop<std::optional<double>> per_consumer_profit{};
  /// Physical price derived from symmetric-cost thresholds under e > 0.
  bool approximate = false;
  /// p_vo - p_vn when both virtual shops are open.
  std::optional<double> online_dispersion;

  double price(ShopId shop) const;
  /// Expected profit of a shop: per-consumer profit times share.
  double shop_profit(ShopId shop) const;
};

/// Regime thresholds for the config's lambda and delta_c, computed once.
struct PricingThresholds {
  double p_o_s = 0.0;
  /// Absent when delta_c >= delta_c_crit.
  std::optional<double> p_m_s;

  static PricingThresholds compute(const MarketConfig& cfg);
};

/// Expected consumer share of `shop` when `alpha` shops are acceptable to
/// new consumers.
double consumer_share(ShopId shop, const PerShop<std::optional<double>>& prices,
                      const ReservationSet& reservations, double lambda,
                      int alpha, const DemandSpec& demand);

/// Number of open shops charging no more than their reservation price.
int acceptable_count(const PerShop<std::optional<double>>& prices,
                     const ReservationSet& reservations);

/// Price equilibrium given reservation prices. Dispatches to
/// price_equilibrium_asym when e > 0 and both firms are open.
PriceEquilibrium price_equilibrium(
    OpeningProfile a, const ReservationSet& reservations,
    const MarketConfig& cfg,
    VoPricingRule vo_rule = VoPricingRule::reservation_capped);

PriceEquilibrium price_equilibrium(
    OpeningProfile a, const ReservationSet& reservations,
    const MarketConfig& cfg, const PricingThresholds& thresholds,
    VoPricingRule vo_rule = VoPricingRule::reservation_capped);

/// Both firms open with an old-firm efficiency loss e > 0. Throws
/// symmetric_path when e == 0.
PriceEquilibrium price_equilibrium_asym(
    OpeningProfile a, const ReservationSet& reservations,
    const MarketConfig& cfg,
    VoPricingRule vo_rule = VoPricingRule::reservation_capped);

/// Zero delivery-wait goods: same regime logic, and a competing physical
/// shop must undercut the virtual shops.
PriceEquilibrium info_goods_equilibrium(
    OpeningProfile a, const ReservationSet& reservations,
    const MarketConfig& cfg,
    VoPricingRule vo_rule = VoPricingRule::reservation_capped);

/// Throws ordering_violation if a competing physical shop does not undercut
/// every virtual shop.
void check_info_goods_ordering(const PriceEquilibrium& eq);

/// Checks that every open shop's reservation price exceeds the lowest price
/// among the other open shops. In information-goods mode the physical
/// shop is exempt. Throws search_assumption on violation.
void check_search_assumption(const PriceEquilibrium& eq,
                             const ReservationSet& reservations,
                             bool info_goods);

}  // namespace emarket
