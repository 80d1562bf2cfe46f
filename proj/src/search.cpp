#include "emarket/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace emarket {

double ReservationSet::at(ShopId shop) const {
  const auto& v = r[shop];
  if (!v) {
    throw ModelError(ErrorKind::profile_mismatch,
                     "no reservation price for shop " +
                         std::string(to_string(shop)) + " in profile " +
                         profile_label(profile));
  }
  return *v;
}

namespace {

Restriction make_open_interval(std::string name, double x, double lo,
                               double hi) {
  const double slack = std::min(x - lo, hi - x);
  return {std::move(name), x > lo && x < hi, slack};
}

Restriction make_less(std::string name, double x, double bound) {
  return {std::move(name), x < bound, bound - x};
}

// Converts a required net surplus at the current shop into a price.
double price_for_net_surplus(double net, ShopId current,
                             const MarketConfig& cfg) {
  return surplus_inverse(net + purchase_cost(current, cfg), cfg.demand);
}

}  // namespace

FeasibilityReport check_feasibility(const MarketConfig& cfg, bool info_goods) {
  FeasibilityReport rep;
  const double sigma = cfg.sigma;
  const double ds = cfg.delta_sigma;
  const double d = cfg.delta_delivery;
  const double gap = surplus_gap(cfg);

  rep.restrictions.push_back(
      make_open_interval("delta_sigma in (0, sigma)", ds, 0.0, sigma));
  if (info_goods) {
    rep.restrictions.push_back({"delta == 0 (information goods)", d == 0.0,
                                -std::abs(d)});
    rep.restrictions.push_back(
        make_less("delta < 2 sigma - delta_sigma", d, 2.0 * sigma - ds));
    rep.restrictions.push_back(
        make_less("delta < surplus_gap + delta_sigma", d, gap + ds));
    rep.delta_lo = 0.0;
    rep.delta_hi = std::min(2.0 * sigma - ds, gap + ds);
  } else {
    rep.delta_lo = ds;
    rep.delta_hi = ds + std::min(gap, 2.0 * (sigma - ds));
    std::ostringstream name;
    name << "delta in (" << rep.delta_lo << ", " << rep.delta_hi << ")";
    rep.restrictions.push_back(
        make_open_interval(name.str(), d, rep.delta_lo, rep.delta_hi));
  }
  rep.hard_ok = std::all_of(rep.restrictions.begin(), rep.restrictions.end(),
                            [](const Restriction& r) { return r.satisfied; });

  const double s_hat_p =
      surplus(monopoly_price(cfg.c_p, cfg.demand), cfg.demand);
  rep.surplus_warning = sigma >= (s_hat_p + ds) / 2.0;
  return rep;
}

double net_surplus(const Offer& offer, const MarketConfig& cfg) {
  return surplus(offer.price, cfg.demand) - purchase_cost(offer.shop, cfg);
}

double reservation_two_shops(const Offer& unsampled, ShopId current,
                             const MarketConfig& cfg) {
  const double net = net_surplus(unsampled, cfg) - cfg.web_visit_cost();
  return price_for_net_surplus(net, current, cfg);
}

double reservation_three_shops(std::span<const Offer, 2> unsampled,
                               ShopId current, const MarketConfig& cfg) {
  const double a = net_surplus(unsampled[0], cfg);
  const double b = net_surplus(unsampled[1], cfg);
  const double better = std::max(a, b);
  const double worse = std::min(a, b);
  const double cost = cfg.web_visit_cost();

  // Both alternatives improve on the reservation surplus.
  double net = 0.5 * (better + worse) - cost;
  if (!(net < worse)) {
    // Only the better alternative does; consistent whenever the first
    // branch is not, since better - worse >= 2 * cost there.
    net = better - 2.0 * cost;
  }
  return price_for_net_surplus(net, current, cfg);
}

double reservation_price(std::span<const Offer> unsampled, ShopId current,
                         const MarketConfig& cfg) {
  if (unsampled.size() == 1) {
    return reservation_two_shops(unsampled[0], current, cfg);
  }
  if (unsampled.size() == 2) {
    return reservation_three_shops(unsampled.first<2>(), current, cfg);
  }
  throw ModelError(ErrorKind::profile_mismatch,
                   "reservation needs one or two unsampled shops");
}

ReservationSet compute_reservations(
    OpeningProfile a, const PerShop<std::optional<double>>& prices,
    const MarketConfig& cfg) {
  ReservationSet res;
  res.profile = a;
  if (!a.any_virtual()) return res;

  for (ShopId shop : kAllShops) {
    if (!a.has(shop)) continue;
    std::vector<Offer> others;
    for (ShopId other : kAllShops) {
      if (other == shop || !a.has(other)) continue;
      if (!prices[other]) {
        throw ModelError(ErrorKind::profile_mismatch,
                         "missing price for open shop " +
                             std::string(to_string(other)));
      }
      others.push_back({other, *prices[other]});
    }
    res.r[shop] = reservation_price(others, shop, cfg);
  }

  // Physical-shop acceptance at later steps: once a virtual offer is held,
  // the physical offer is taken only if it beats the best virtual offer.
  double best_virtual = -std::numeric_limits<double>::infinity();
  for (ShopId shop : {ShopId::vn, ShopId::vo}) {
    if (a.has(shop)) {
      best_virtual = std::max(best_virtual, net_surplus({shop, *prices[shop]}, cfg));
    }
  }
  const double later = surplus_inverse(
      std::min(best_virtual + cfg.sigma, surplus(0.0, cfg.demand)),
      cfg.demand);
  res.step_thresholds.push_back({2, *res.r[ShopId::p]});
  const int last_step = a.site_count() + 1;
  for (int step = 3; step <= last_step; ++step) {
    res.step_thresholds.push_back({step, later});
  }
  return res;
}

}  // namespace emarket
