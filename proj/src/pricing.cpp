#include "emarket/pricing.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "emarket/thresholds.hpp"

namespace emarket {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::monopoly: return "Monopoly";
    case Regime::competing: return "Competing";
    case Regime::segmentation: return "Segmentation";
  }
  return "?";
}

double PriceEquilibrium::price(ShopId shop) const {
  if (!prices[shop]) {
    throw ModelError(ErrorKind::profile_mismatch,
                     "shop " + std::string(to_string(shop)) +
                         " is not open in profile " + profile_label(profile));
  }
  return *prices[shop];
}

double PriceEquilibrium::shop_profit(ShopId shop) const {
  return per_consumer_profit[shop].value_or(0.0) * shares[shop];
}

namespace {

bool acceptable(double price, double reservation) {
  return price <= reservation + kTolerance;
}

void fill_outcome(PriceEquilibrium& eq, const ReservationSet& res,
                  const MarketConfig& cfg) {
  const auto& d = cfg.demand;
  if (!eq.profile.any_virtual()) {
    eq.alpha = 1;
    eq.shares[ShopId::p] = eq.price(ShopId::p) <= d.choke_price() ? 1.0 : 0.0;
  } else {
    eq.alpha = acceptable_count(eq.prices, res);
    // Off the fixed point no offer may be acceptable yet; only old
    // consumers are then allocated.
    if (eq.alpha < 1) {
      eq.shares[ShopId::p] =
          eq.price(ShopId::p) <= d.choke_price() ? 1.0 - cfg.lambda : 0.0;
    } else {
      for (ShopId shop : kAllShops) {
        if (!eq.profile.has(shop)) continue;
        eq.shares[shop] =
            consumer_share(shop, eq.prices, res, cfg.lambda, eq.alpha, d);
      }
    }
  }
  for (ShopId shop : kAllShops) {
    if (eq.prices[shop]) {
      eq.per_consumer_profit[shop] =
          profit(*eq.prices[shop], unit_cost(shop, cfg), d);
    }
  }
  if (eq.prices[ShopId::vn] && eq.prices[ShopId::vo]) {
    eq.online_dispersion = *eq.prices[ShopId::vo] - *eq.prices[ShopId::vn];
  }
}

void check_profile(OpeningProfile a, const ReservationSet& res) {
  if (!(res.profile == a)) {
    throw ModelError(ErrorKind::profile_mismatch,
                     "reservations computed for profile " +
                         profile_label(res.profile) + ", requested " +
                         profile_label(a));
  }
}

// Physical price and regime under the symmetric-cost thresholds.
void set_physical_price(PriceEquilibrium& eq, const ReservationSet& res,
                        const MarketConfig& cfg,
                        const PricingThresholds& thresholds) {
  const auto& d = cfg.demand;
  const double p_hat_p = monopoly_price(cfg.c_p, d);
  const OpeningProfile a = eq.profile;

  if (!a.any_virtual()) {
    eq.regime = Regime::monopoly;
    eq.prices[ShopId::p] = p_hat_p;
    return;
  }
  // With only its own virtual shop open, the old firm gains nothing from
  // cutting the physical price.
  if (!a.new_opens) {
    eq.regime = Regime::segmentation;
    eq.prices[ShopId::p] = p_hat_p;
    return;
  }

  const double r_p = res.at(ShopId::p);
  bool compete = false;
  if (!a.old_opens) {
    compete = thresholds.p_o_s < r_p;
  } else if (thresholds.p_m_s) {
    compete = *thresholds.p_m_s < r_p;
  }
  // Indifference resolves to serving only old consumers.
  eq.regime = compete ? Regime::competing : Regime::segmentation;
  eq.prices[ShopId::p] = compete ? r_p : p_hat_p;
}

PriceEquilibrium asym_equilibrium(OpeningProfile a,
                                  const ReservationSet& reservations,
                                  const MarketConfig& cfg,
                                  const PricingThresholds& thresholds,
                                  VoPricingRule vo_rule) {
  if (!(cfg.e_loss > 0.0)) {
    throw ModelError(ErrorKind::symmetric_path,
                     "efficiency loss is zero; use the symmetric path");
  }
  if (!(a.new_opens && a.old_opens)) {
    throw ModelError(ErrorKind::profile_mismatch,
                     "asymmetric pricing applies when both firms are open");
  }
  check_profile(a, reservations);

  PriceEquilibrium eq;
  eq.profile = a;
  const auto& d = cfg.demand;
  const double c_vo = cfg.c_vo();
  const double p_hat_vo = monopoly_price(c_vo, d);
  eq.prices[ShopId::vn] = monopoly_price(cfg.c_v(), d);
  const double cap = vo_rule == VoPricingRule::reservation_capped
                         ? reservations.at(ShopId::vo)
                         : c_vo;
  eq.prices[ShopId::vo] = std::min(cap, p_hat_vo);
  set_physical_price(eq, reservations, cfg, thresholds);
  eq.approximate = true;
  fill_outcome(eq, reservations, cfg);
  return eq;
}

}  // namespace

PricingThresholds PricingThresholds::compute(const MarketConfig& cfg) {
  return {emarket::p_o_s(cfg.lambda, cfg),
          p_m_s_if_defined(cfg.lambda, cfg.delta_c, cfg)};
}

int acceptable_count(const PerShop<std::optional<double>>& prices,
                     const ReservationSet& reservations) {
  int alpha = 0;
  for (ShopId shop : kAllShops) {
    if (!prices[shop] || !reservations.r[shop]) continue;
    if (acceptable(*prices[shop], *reservations.r[shop])) ++alpha;
  }
  return alpha;
}

double consumer_share(ShopId shop, const PerShop<std::optional<double>>& prices,
                      const ReservationSet& reservations, double lambda,
                      int alpha, const DemandSpec& demand) {
  if (alpha < 1) {
    throw ModelError(ErrorKind::search_assumption,
                     "no shop is acceptable to new consumers");
  }
  if (!prices[shop]) return 0.0;
  const double p = *prices[shop];
  const double r_t = reservations.at(shop);
  const double new_share = lambda / alpha;
  if (is_virtual(shop)) {
    return acceptable(p, r_t) ? new_share : 0.0;
  }
  if (p > demand.choke_price()) return 0.0;
  if (acceptable(p, r_t)) return new_share + 1.0 - lambda;
  return 1.0 - lambda;
}

PriceEquilibrium price_equilibrium(OpeningProfile a,
                                   const ReservationSet& reservations,
                                   const MarketConfig& cfg,
                                   VoPricingRule vo_rule) {
  return price_equilibrium(a, reservations, cfg,
                           PricingThresholds::compute(cfg), vo_rule);
}

PriceEquilibrium price_equilibrium(OpeningProfile a,
                                   const ReservationSet& reservations,
                                   const MarketConfig& cfg,
                                   const PricingThresholds& thresholds,
                                   VoPricingRule vo_rule) {
  if (cfg.e_loss > 0.0 && a.new_opens && a.old_opens) {
    return asym_equilibrium(a, reservations, cfg, thresholds, vo_rule);
  }
  if (a.any_virtual()) check_profile(a, reservations);

  PriceEquilibrium eq;
  eq.profile = a;
  const auto& d = cfg.demand;
  // Virtual shops are never constrained by search and charge their
  // monopoly price.
  if (a.new_opens) eq.prices[ShopId::vn] = monopoly_price(cfg.c_v(), d);
  if (a.old_opens) eq.prices[ShopId::vo] = monopoly_price(cfg.c_vo(), d);
  set_physical_price(eq, reservations, cfg, thresholds);
  fill_outcome(eq, reservations, cfg);
  return eq;
}

PriceEquilibrium price_equilibrium_asym(OpeningProfile a,
                                        const ReservationSet& reservations,
                                        const MarketConfig& cfg,
                                        VoPricingRule vo_rule) {
  return asym_equilibrium(a, reservations, cfg,
                          PricingThresholds::compute(cfg), vo_rule);
}

PriceEquilibrium info_goods_equilibrium(OpeningProfile a,
                                        const ReservationSet& reservations,
                                        const MarketConfig& cfg,
                                        VoPricingRule vo_rule) {
  if (cfg.delta_delivery != 0.0) {
    throw ModelError(ErrorKind::invalid_config,
                     "information-goods mode requires delta == 0");
  }
  PriceEquilibrium eq = price_equilibrium(a, reservations, cfg, vo_rule);
  check_info_goods_ordering(eq);
  return eq;
}

void check_info_goods_ordering(const PriceEquilibrium& eq) {
  if (eq.regime != Regime::competing) return;
  const double p_p = eq.price(ShopId::p);
  for (ShopId shop : {ShopId::vn, ShopId::vo}) {
    if (eq.prices[shop] && !(p_p < *eq.prices[shop])) {
      std::ostringstream os;
      os << "competing physical price " << p_p
         << " does not undercut virtual price " << *eq.prices[shop];
      throw ModelError(ErrorKind::ordering_violation, os.str());
    }
  }
}

void check_search_assumption(const PriceEquilibrium& eq,
                             const ReservationSet& reservations,
                             bool info_goods) {
  const OpeningProfile a = eq.profile;
  if (!a.any_virtual()) return;
  for (ShopId shop : kAllShops) {
    if (!a.has(shop)) continue;
    if (info_goods && shop == ShopId::p) continue;
    double lowest = std::numeric_limits<double>::infinity();
    for (ShopId other : kAllShops) {
      if (other != shop && a.has(other)) {
        lowest = std::min(lowest, eq.price(other));
      }
    }
    const double r_t = reservations.at(shop);
    if (!(lowest < r_t)) {
      std::ostringstream os;
      os << "reservation price r_" << to_string(shop) << "=" << r_t
         << " does not exceed the lowest other price " << lowest
         << " in profile " << profile_label(a);
      throw ModelError(ErrorKind::search_assumption, os.str());
    }
  }
}

}  // namespace emarket
