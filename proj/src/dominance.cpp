#include "emarket/dominance.hpp"

#include <algorithm>
#include <cmath>

namespace emarket {

namespace {

constexpr double kMassTolerance = 1e-12;

void sort_and_merge(std::vector<PriceAtom>& atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const PriceAtom& a, const PriceAtom& b) { return a.price < b.price; });
  std::vector<PriceAtom> merged;
  for (const auto& atom : atoms) {
    if (!merged.empty() && std::abs(merged.back().price - atom.price) <= kTolerance) {
      merged.back().mass += atom.mass;
    } else {
      merged.push_back(atom);
    }
  }
  atoms = std::move(merged);
}

}  // namespace

double TransactionDistribution::cdf(double p) const {
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (atom.price <= p) total += atom.mass;
  }
  return total;
}

TransactionDistribution transaction_distribution(const PriceEquilibrium& eq) {
  TransactionDistribution dist;
  dist.profile = eq.profile;
  for (ShopId shop : kAllShops) {
    if (!eq.prices[shop] || eq.shares[shop] <= 0.0) continue;
    dist.atoms.push_back({*eq.prices[shop], eq.shares[shop]});
  }
  sort_and_merge(dist.atoms);
  return dist;
}

TransactionDistribution posted_price_distribution(const PriceEquilibrium& eq) {
  TransactionDistribution dist;
  dist.profile = eq.profile;
  const double mass = 1.0 / eq.profile.site_count();
  for (ShopId shop : kAllShops) {
    if (eq.prices[shop]) dist.atoms.push_back({*eq.prices[shop], mass});
  }
  sort_and_merge(dist.atoms);
  return dist;
}

std::string_view to_string(Dominance d) {
  switch (d) {
    case Dominance::dominates: return "dominates";
    case Dominance::dominated: return "dominated";
    case Dominance::equal: return "equal";
    case Dominance::incomparable: return "incomparable";
  }
  return "?";
}

DominanceResult fosd(const TransactionDistribution& f,
                     const TransactionDistribution& g) {
  // Step CDFs only change at atoms, so the union of atom prices suffices.
  std::vector<double> points;
  for (const auto& a : f.atoms) points.push_back(a.price);
  for (const auto& a : g.atoms) points.push_back(a.price);

  bool f_below = false;
  bool f_above = false;
  for (double p : points) {
    const double diff = f.cdf(p) - g.cdf(p);
    if (diff < -kMassTolerance) f_below = true;
    if (diff > kMassTolerance) f_above = true;
  }
  if (f_below && f_above) return {Dominance::incomparable, false};
  if (f_below) return {Dominance::dominates, true};
  if (f_above) return {Dominance::dominated, true};
  return {Dominance::equal, false};
}

}  // namespace emarket
