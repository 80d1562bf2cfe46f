#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace emarket {

/// Absolute tolerance for price and currency comparisons.
inline constexpr double kTolerance = 1e-9;

enum class ErrorKind {
  degenerate_demand,
  invalid_config,
  out_of_regime,
  out_of_range,
  no_acceptance,
  non_convergence,
  search_assumption,
  profile_mismatch,
  symmetric_path,
  ordering_violation,
  scenario_inconsistency,
  parse_error,
};

std::string_view to_string(ErrorKind kind);

class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class DemandKind { linear };

/// D(p) = max{0, intercept - slope * p}; choke price intercept / slope.
struct DemandSpec {
  DemandKind kind = DemandKind::linear;
  double intercept = 1.0;
  double slope = 1.0;

  double choke_price() const { return intercept / slope; }
};

/// All market primitives. `lambda` is the share of consumers with Internet
/// access; `delta_delivery` is the cost of waiting for a virtual-shop order.
struct MarketConfig {
  double lambda = 0.5;
  double c_p = 0.4;
  double delta_c = 0.2;
  double K = 0.01;
  double sigma = 0.05;
  double delta_sigma = 0.04;
  double delta_delivery = 0.05;
  double e_loss = 0.0;
  DemandSpec demand{};

  double c_v() const { return c_p - delta_c; }
  double c_vo() const { return c_p - (1.0 - e_loss) * delta_c; }
  double web_visit_cost() const { return sigma - delta_sigma; }
};

/// Throws ModelError(invalid_config) naming the first violated invariant.
void validate(const MarketConfig& cfg);

enum class ShopId : std::size_t { vn = 0, vo = 1, p = 2 };

inline constexpr std::array<ShopId, 3> kAllShops{ShopId::vn, ShopId::vo,
                                                 ShopId::p};

std::string_view to_string(ShopId shop);

inline bool is_virtual(ShopId shop) { return shop != ShopId::p; }

/// Fixed-size map keyed by shop.
template <typename T>
struct PerShop {
  std::array<T, 3> values{};

  T& operator[](ShopId s) { return values[static_cast<std::size_t>(s)]; }
  const T& operator[](ShopId s) const {
    return values[static_cast<std::size_t>(s)];
  }
  bool operator==(const PerShop&) const = default;
};

/// Stage-1 decisions of the new and the old firm.
struct OpeningProfile {
  bool new_opens = false;
  bool old_opens = false;

  bool operator==(const OpeningProfile&) const = default;
  bool has(ShopId shop) const {
    switch (shop) {
      case ShopId::vn: return new_opens;
      case ShopId::vo: return old_opens;
      case ShopId::p: return true;
    }
    return false;
  }
  bool any_virtual() const { return new_opens || old_opens; }
  int site_count() const { return 1 + int(new_opens) + int(old_opens); }
};

inline constexpr std::array<OpeningProfile, 4> kAllProfiles{
    OpeningProfile{false, false}, OpeningProfile{true, false},
    OpeningProfile{false, true}, OpeningProfile{true, true}};

/// "00", "10", "01" or "11" (new firm first).
std::string profile_label(OpeningProfile a);

double demand(double p, const DemandSpec& d);

/// Per-consumer profit (p - c) D(p).
double profit(double p, double c, const DemandSpec& d);

double monopoly_price(double c, const DemandSpec& d);

/// Consumer surplus: integral of D from p to infinity.
double surplus(double p, const DemandSpec& d);

/// Price whose surplus equals s. Returns the choke price for s <= 0 and
/// throws no_acceptance when s exceeds surplus(0).
double surplus_inverse(double s, const DemandSpec& d);

/// Marginal cost of a shop under cfg.
double unit_cost(ShopId shop, const MarketConfig& cfg);

/// Cost a buyer bears on top of the price: the shopping trip for the
/// physical shop, waiting for delivery for a virtual one.
double purchase_cost(ShopId shop, const MarketConfig& cfg);

/// Ratio of the virtual to the physical monopoly profit when the virtual
/// cost reduction is delta_c.
double monopoly_profit_ratio(double delta_c, const MarketConfig& cfg);

/// surplus(p̂_v) - surplus(p̂_p).
double surplus_gap(const MarketConfig& cfg);

}  // namespace emarket
