#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emarket/model.hpp"

namespace emarket {

/// A posted (or anticipated) price at a shop.
struct Offer {
  ShopId shop = ShopId::p;
  double price = 0.0;
};

/// Acceptance threshold for the physical shop's offer at a given search step.
struct StepThreshold {
  int step = 0;
  double price = 0.0;
};

/// New consumers' reservation prices for one opening profile. Shops that are
/// not open carry no reservation price.
struct ReservationSet {
  OpeningProfile profile{};
  PerShop<std::optional<double>> r{};
  /// Physical-shop acceptance prices at steps 2.. (diagnostic only).
  std::vector<StepThreshold> step_thresholds;

  double at(ShopId shop) const;
};

struct Restriction {
  std::string name;
  bool satisfied = false;
  /// Positive when satisfied; distance to the violated bound otherwise.
  double slack = 0.0;
};

struct FeasibilityReport {
  std::vector<Restriction> restrictions;
  bool hard_ok = false;
  /// Consumers' net surplus may be non-positive.
  bool surplus_warning = false;
  /// Open interval admissible for the delivery cost in standard mode.
  double delta_lo = 0.0;
  double delta_hi = 0.0;
};

FeasibilityReport check_feasibility(const MarketConfig& cfg, bool info_goods);

/// Net surplus of buying at `offer`: surplus(price) - purchase_cost(shop).
double net_surplus(const Offer& offer, const MarketConfig& cfg);

/// Reservation price for `current` when exactly one shop is left unsampled:
/// the gain from sampling it equals the Web visit cost.
double reservation_two_shops(const Offer& unsampled, ShopId current,
                             const MarketConfig& cfg);

/// Reservation price for `current` with two unsampled shops, each sampled
/// next with probability 1/2. Uses the branch where both alternatives beat
/// the reservation surplus when consistent, otherwise only the better one.
double reservation_three_shops(std::span<const Offer, 2> unsampled,
                               ShopId current, const MarketConfig& cfg);

/// Reservation price of `current` against any number (1 or 2) of unsampled
/// shops.
double reservation_price(std::span<const Offer> unsampled, ShopId current,
                         const MarketConfig& cfg);

/// Reservation prices of every open shop against the anticipated prices of
/// the other open shops. `prices` must hold a value for every open shop.
ReservationSet compute_reservations(OpeningProfile a,
                                    const PerShop<std::optional<double>>& prices,
                                    const MarketConfig& cfg);

}  // namespace emarket
