#pragma once

#include <string_view>
#include <vector>

#include "emarket/model.hpp"
#include "emarket/pricing.hpp"

namespace emarket {

struct PriceAtom {
  double price = 0.0;
  double mass = 0.0;
};

/// Distribution of transaction prices over the unit consumer mass.
struct TransactionDistribution {
  OpeningProfile profile{};
  /// Sorted by price, positive masses.
  std::vector<PriceAtom> atoms;

  /// Mass of transactions at prices <= p.
  double cdf(double p) const;
};

/// One atom per selling shop at its price, mass = its consumer share.
TransactionDistribution transaction_distribution(const PriceEquilibrium& eq);

/// Equal mass on every open shop's posted price: the market's offer
/// distribution as seen by a randomly sampling consumer.
TransactionDistribution posted_price_distribution(const PriceEquilibrium& eq);

enum class Dominance { dominates, dominated, equal, incomparable };

std::string_view to_string(Dominance d);

struct DominanceResult {
  Dominance relation = Dominance::equal;
  /// Weak relation that is also strict somewhere.
  bool strict = false;
};

/// First-order stochastic dominance of F over G: F(p) <= G(p) everywhere.
/// "dominated" means G dominates F.
DominanceResult fosd(const TransactionDistribution& f,
                     const TransactionDistribution& g);

}  // namespace emarket
