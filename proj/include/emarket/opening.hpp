#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "emarket/fixed_point.hpp"
#include "emarket/model.hpp"
#include "emarket/thresholds.hpp"

namespace emarket {

enum class Firm { new_firm = 0, old_firm = 1 };

/// Value per opening profile, indexed [a_n][a_o].
template <typename T>
using ProfileTable = std::array<std::array<T, 2>, 2>;

template <typename T>
const T& at(const ProfileTable<T>& t, OpeningProfile a) {
  return t[a.new_opens][a.old_opens];
}
template <typename T>
T& at(ProfileTable<T>& t, OpeningProfile a) {
  return t[a.new_opens][a.old_opens];
}

/// Decomposition of a firm's gain from opening a virtual shop, given the
/// new firm's stage-1 action.
struct EffectsBreakdown {
  /// Rival's action held fixed: the new firm's for the old-firm effects,
  /// the old firm's for business_creating.
  int given_rival_action = 0;
  /// New firm's gross profit from its virtual shop.
  double business_creating = 0.0;
  /// Old firm serving, through its virtual shop, new consumers its physical
  /// shop would otherwise have served.
  double cost_reduction = 0.0;
  /// Old firm's virtual shop taking new consumers from the new firm.
  double market_penetration = 0.0;
  /// Physical shop moving from competing to serving only old consumers.
  double price_discrimination = 0.0;
  /// lambda / m_c and lambda / m_p: new-consumer mass moved to the old
  /// firm's virtual shop from the physical shop and from the new firm.
  double cost_reduction_share = 0.0;
  double market_penetration_share = 0.0;
  std::optional<double> m_c;
  std::optional<double> m_p;
  bool cost_reduction_present = false;
  bool market_penetration_present = false;
  bool price_discrimination_present = false;
  /// (sum of old-firm effects) - (incremental profit + K).
  double old_identity_residual = 0.0;
  /// business_creating - (incremental profit + K) for the new firm.
  double new_identity_residual = 0.0;
};

struct MixedEquilibrium {
  double prob_new_opens = 0.0;
  double prob_old_opens = 0.0;
};

enum class AdoptionRegion { none, small_cost_reduction, large_cost_reduction };

std::string_view to_string(AdoptionRegion region);

/// Closed-form prediction of the opening profile in the two characterised
/// parameter regions, compared with the solved game. Only made when the
/// no-entry profile is ruled out.
struct RegionPrediction {
  AdoptionRegion region = AdoptionRegion::none;
  std::optional<OpeningProfile> predicted;
  bool agrees = true;
};

struct OpeningOutcome {
  /// Solved stage-2 subgames.
  ProfileTable<FixedPointResult> subgames{};
  /// Net payoffs V^j per profile.
  ProfileTable<double> payoff_new{};
  ProfileTable<double> payoff_old{};
  /// Incremental profit of opening, given the rival's action d.
  std::array<double, 2> incremental_new{};
  std::array<double, 2> incremental_old{};
  std::vector<OpeningProfile> pure_equilibria;
  std::optional<MixedEquilibrium> mixed_equilibrium;
  std::array<EffectsBreakdown, 2> effects{};
  RegionPrediction region;
  /// The rival-independent assumption ruling out (0, 0) fails.
  bool no_entry_warning = false;

  const PriceEquilibrium& equilibrium(OpeningProfile a) const {
    return at(subgames, a).equilibrium;
  }
  /// Expected incremental profit of firm j when its rival opens with
  /// probability q.
  double expected_incremental(Firm firm, double rival_open_prob) const;
};

/// Solves every profile's subgame and fills the payoffs.
OpeningOutcome payoff_matrix(const MarketConfig& cfg,
                             const SolveOptions& opts = {});

/// Fills incremental profits from the payoffs.
void incremental_profits(OpeningOutcome& out);

/// Four-effect decomposition of the incremental profits for d = 0 and 1.
std::array<EffectsBreakdown, 2> effects_decomposition(const MarketConfig& cfg,
                                                      const OpeningOutcome& out);

/// Equilibria of a 2x2 opening game. Payoffs indexed [a_n][a_o]. Pure
/// equilibria use the open-when-indifferent tie-break; when none exist the
/// mixed equilibrium is returned.
struct BimatrixSolution {
  std::vector<OpeningProfile> pure;
  std::optional<MixedEquilibrium> mixed;
};
BimatrixSolution solve_opening_game(const ProfileTable<double>& payoff_new,
                                    const ProfileTable<double>& payoff_old);

/// The profile reported as a*: the single pure equilibrium, or when several
/// exist the first of (1,1), (1,0), (0,1), (0,0). Empty when only the mixed
/// equilibrium exists.
std::optional<OpeningProfile> selected_profile(const OpeningOutcome& out);

/// Fills equilibria, region prediction and warnings.
void opening_equilibrium(const MarketConfig& cfg, OpeningOutcome& out);

/// payoff_matrix + incremental_profits + effects + opening_equilibrium.
OpeningOutcome solve_opening_stage(const MarketConfig& cfg,
                                   const SolveOptions& opts = {});

enum class OrderingCase { not_applicable, small_cost_reduction, large_cost_reduction };

std::string_view to_string(OrderingCase c);

/// Ordering of incremental profits in the two characterised regions.
struct IncentiveOrderingReport {
  OrderingCase which = OrderingCase::not_applicable;
  bool holds = true;
  std::string detail;
};

IncentiveOrderingReport check_incentive_ordering(const MarketConfig& cfg,
                                                 const OpeningOutcome& out);

}  // namespace emarket
