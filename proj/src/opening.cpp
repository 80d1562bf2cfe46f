#include "emarket/opening.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "emarket/pricing.hpp"

namespace emarket {

namespace {

constexpr double kIdentityTolerance = 1e-9;

// New-consumer mass buying at the physical shop.
double physical_new_share(const PriceEquilibrium& eq, double lambda) {
  const double s = eq.shares[ShopId::p];
  return s > 0.0 ? s - (1.0 - lambda) : 0.0;
}

double physical_unit_profit(const PriceEquilibrium& eq) {
  return eq.per_consumer_profit[ShopId::p].value_or(0.0);
}

bool contains(const std::vector<OpeningProfile>& v, OpeningProfile a) {
  for (const auto& b : v) {
    if (b == a) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(AdoptionRegion region) {
  switch (region) {
    case AdoptionRegion::none: return "none";
    case AdoptionRegion::small_cost_reduction: return "small_cost_reduction";
    case AdoptionRegion::large_cost_reduction: return "large_cost_reduction";
  }
  return "?";
}

std::string_view to_string(OrderingCase c) {
  switch (c) {
    case OrderingCase::not_applicable: return "not_applicable";
    case OrderingCase::small_cost_reduction: return "small_cost_reduction";
    case OrderingCase::large_cost_reduction: return "large_cost_reduction";
  }
  return "?";
}

double OpeningOutcome::expected_incremental(Firm firm,
                                            double rival_open_prob) const {
  const auto& inc = firm == Firm::new_firm ? incremental_new : incremental_old;
  return rival_open_prob * inc[1] + (1.0 - rival_open_prob) * inc[0];
}

OpeningOutcome payoff_matrix(const MarketConfig& cfg, const SolveOptions& opts) {
  OpeningOutcome out;
  for (OpeningProfile a : kAllProfiles) {
    FixedPointResult& fp = at(out.subgames, a);
    fp = solve_fixed_point(a, cfg, opts);
    const PriceEquilibrium& eq = fp.equilibrium;
    at(out.payoff_new, a) =
        a.new_opens ? eq.shop_profit(ShopId::vn) - cfg.K : 0.0;
    at(out.payoff_old, a) = eq.shop_profit(ShopId::p) +
                            (a.old_opens ? eq.shop_profit(ShopId::vo) - cfg.K
                                         : 0.0);
  }
  return out;
}

void incremental_profits(OpeningOutcome& out) {
  for (int d : {0, 1}) {
    out.incremental_new[d] = out.payoff_new[1][d] - out.payoff_new[0][d];
    out.incremental_old[d] = out.payoff_old[d][1] - out.payoff_old[d][0];
  }
}

std::array<EffectsBreakdown, 2> effects_decomposition(
    const MarketConfig& cfg, const OpeningOutcome& out) {
  std::array<EffectsBreakdown, 2> effects{};
  const double lambda = cfg.lambda;
  for (int d : {0, 1}) {
    EffectsBreakdown& fx = effects[d];
    fx.given_rival_action = d;
    const OpeningProfile closed{d == 1, false};
    const OpeningProfile open{d == 1, true};
    const PriceEquilibrium& before = out.equilibrium(closed);
    const PriceEquilibrium& after = out.equilibrium(open);

    const PriceEquilibrium& new_firm = out.equilibrium({true, d == 1});
    fx.business_creating = new_firm.shop_profit(ShopId::vn);
    fx.new_identity_residual =
        fx.business_creating - (out.incremental_new[d] + cfg.K);

    const double x_c =
        physical_new_share(before, lambda) - physical_new_share(after, lambda);
    const double x_m = after.shares[ShopId::vo] - x_c;
    const double pi_vo = *after.per_consumer_profit[ShopId::vo];
    fx.cost_reduction_share = x_c;
    fx.market_penetration_share = x_m;
    fx.cost_reduction = (pi_vo - physical_unit_profit(before)) * x_c;
    fx.market_penetration = pi_vo * x_m;
    fx.price_discrimination =
        (physical_unit_profit(after) - physical_unit_profit(before)) *
        after.shares[ShopId::p];
    if (x_c > kIdentityTolerance) fx.m_c = lambda / x_c;
    if (x_m > kIdentityTolerance) fx.m_p = lambda / x_m;

    const bool switches = before.regime == Regime::competing &&
                          after.regime == Regime::segmentation;
    if (d == 0) {
      fx.cost_reduction_present = lambda > 0.0;
    } else {
      fx.cost_reduction_present = before.regime == Regime::competing;
      fx.market_penetration_present = !switches;
      fx.price_discrimination_present = switches;
    }
    fx.old_identity_residual = fx.cost_reduction + fx.market_penetration +
                               fx.price_discrimination -
                               (out.incremental_old[d] + cfg.K);
  }
  return effects;
}

BimatrixSolution solve_opening_game(const ProfileTable<double>& payoff_new,
                                    const ProfileTable<double>& payoff_old) {
  BimatrixSolution sol;
  // Best responses with the open-when-indifferent tie-break.
  auto new_opens_given = [&](int a_o) {
    return payoff_new[1][a_o] >= payoff_new[0][a_o];
  };
  auto old_opens_given = [&](int a_n) {
    return payoff_old[a_n][1] >= payoff_old[a_n][0];
  };
  for (OpeningProfile a : kAllProfiles) {
    if (new_opens_given(a.old_opens) == a.new_opens &&
        old_opens_given(a.new_opens) == a.old_opens) {
      sol.pure.push_back(a);
    }
  }
  if (!sol.pure.empty()) return sol;

  // Each firm mixes so that the rival is indifferent.
  const double dn0 = payoff_new[1][0] - payoff_new[0][0];
  const double dn1 = payoff_new[1][1] - payoff_new[0][1];
  const double do0 = payoff_old[0][1] - payoff_old[0][0];
  const double do1 = payoff_old[1][1] - payoff_old[1][0];
  if (do0 != do1 && dn0 != dn1) {
    const double q_n = do0 / (do0 - do1);
    const double q_o = dn0 / (dn0 - dn1);
    if (q_n >= 0.0 && q_n <= 1.0 && q_o >= 0.0 && q_o <= 1.0) {
      sol.mixed = MixedEquilibrium{q_n, q_o};
      return sol;
    }
  }
  // Unreachable for a 2x2 game; keep weak equilibria as a last resort.
  for (OpeningProfile a : kAllProfiles) {
    const double dn = payoff_new[1][a.old_opens] - payoff_new[0][a.old_opens];
    const double dd = payoff_old[a.new_opens][1] - payoff_old[a.new_opens][0];
    const bool n_ok = a.new_opens ? dn >= -kIdentityTolerance
                                  : dn <= kIdentityTolerance;
    const bool o_ok = a.old_opens ? dd >= -kIdentityTolerance
                                  : dd <= kIdentityTolerance;
    if (n_ok && o_ok) sol.pure.push_back(a);
  }
  return sol;
}

std::optional<OpeningProfile> selected_profile(const OpeningOutcome& out) {
  for (OpeningProfile a : {OpeningProfile{true, true}, OpeningProfile{true, false},
                           OpeningProfile{false, true}, OpeningProfile{false, false}}) {
    if (contains(out.pure_equilibria, a)) return a;
  }
  return std::nullopt;
}

void opening_equilibrium(const MarketConfig& cfg, OpeningOutcome& out) {
  const BimatrixSolution sol = solve_opening_game(out.payoff_new, out.payoff_old);
  out.pure_equilibria = sol.pure;
  out.mixed_equilibrium = sol.mixed;
  out.no_entry_warning =
      std::max(out.incremental_old[0], out.payoff_new[1][0]) < 0.0;

  const double dc = cfg.delta_c;
  const double d_o_11 = out.incremental_old[1];
  const double d_o_10 = out.incremental_old[0];
  const double v_n_10 = out.payoff_new[1][0];
  RegionPrediction& pred = out.region;
  pred = {};
  const PriceEquilibrium& eq10 = out.equilibrium({true, false});
  // The characterisation assumes the no-entry profile is ruled out.
  if (out.no_entry_warning) {
    pred.agrees = true;
    return;
  }
  if (dc < delta_c_hat(1.5, cfg)) {
    pred.region = AdoptionRegion::small_cost_reduction;
    pred.predicted = d_o_11 < 0.0 ? OpeningProfile{true, false}
                                  : OpeningProfile{true, true};
  } else if (eq10.regime == Regime::competing && dc > delta_c_crit(cfg)) {
    pred.region = AdoptionRegion::large_cost_reduction;
    if (v_n_10 < 0.0 && 0.0 <= d_o_10) {
      pred.predicted = OpeningProfile{false, true};
    } else if (d_o_11 < 0.0 && 0.0 <= v_n_10) {
      pred.predicted = OpeningProfile{true, false};
    } else if (0.0 <= d_o_11) {
      pred.predicted = OpeningProfile{true, true};
    }
  }
  pred.agrees = !pred.predicted || contains(out.pure_equilibria, *pred.predicted);
}

OpeningOutcome solve_opening_stage(const MarketConfig& cfg,
                                   const SolveOptions& opts) {
  OpeningOutcome out = payoff_matrix(cfg, opts);
  incremental_profits(out);
  out.effects = effects_decomposition(cfg, out);
  opening_equilibrium(cfg, out);
  return out;
}

IncentiveOrderingReport check_incentive_ordering(const MarketConfig& cfg,
                                                 const OpeningOutcome& out) {
  IncentiveOrderingReport rep;
  const double d_o_10 = out.incremental_old[0];
  const double d_o_11 = out.incremental_old[1];
  const double v_n_10 = out.payoff_new[1][0];
  const double v_n_11 = out.payoff_new[1][1];
  std::ostringstream os;
  os.precision(10);
  if (cfg.delta_c < delta_c_hat(1.5, cfg)) {
    rep.which = OrderingCase::small_cost_reduction;
    rep.holds = std::max(d_o_10, d_o_11) < v_n_11 &&
                v_n_11 <= v_n_10 + kIdentityTolerance;
    os << "max(" << d_o_10 << ", " << d_o_11 << ") < " << v_n_11
       << " <= " << v_n_10;
  } else if (cfg.delta_c > delta_c_crit(cfg) &&
             out.equilibrium({true, false}).regime == Regime::competing) {
    rep.which = OrderingCase::large_cost_reduction;
    rep.holds = d_o_11 < v_n_11 &&
                std::abs(v_n_11 - v_n_10) <= kIdentityTolerance &&
                v_n_10 < d_o_10;
    os << d_o_11 << " < " << v_n_11 << " = " << v_n_10 << " < " << d_o_10;
  }
  rep.detail = os.str();
  return rep;
}

}  // namespace emarket
