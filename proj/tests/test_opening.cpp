#include <doctest.h>

#include <cmath>

#include "emarket/opening.hpp"
#include "emarket/thresholds.hpp"
#include "generators.hpp"

using namespace emarket;

namespace {

bool has_profile(const OpeningOutcome& o, OpeningProfile a) {
  for (const auto& b : o.pure_equilibria) {
    if (b == a) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("reference payoffs") {
  const OpeningOutcome o = solve_opening_stage(gen::cfg_a());
  CHECK(o.payoff_new[0][0] == 0.0);
  CHECK(o.payoff_new[0][1] == 0.0);
  CHECK(o.payoff_new[1][0] == doctest::Approx(0.03));
  CHECK(o.payoff_new[1][1] == doctest::Approx(0.03));
  CHECK(o.payoff_old[0][0] == doctest::Approx(0.09));
  CHECK(o.payoff_old[0][1] == doctest::Approx(0.115));
  CHECK(o.payoff_old[1][0] == doctest::Approx(0.0633746).epsilon(1e-6));
  CHECK(o.payoff_old[1][1] == doctest::Approx(0.075));
  CHECK(o.incremental_new[0] == doctest::Approx(0.03));
  CHECK(o.incremental_new[1] == doctest::Approx(0.03));
  CHECK(o.incremental_old[0] == doctest::Approx(0.025));
  CHECK(o.incremental_old[1] == doctest::Approx(0.0116254).epsilon(1e-6));

  REQUIRE(o.pure_equilibria.size() == 1);
  CHECK(o.pure_equilibria[0] == OpeningProfile{true, true});
  CHECK(selected_profile(o) == OpeningProfile{true, true});
  CHECK_FALSE(o.mixed_equilibrium);
  CHECK_FALSE(o.no_entry_warning);
  // Between the two characterised cost regions.
  CHECK(o.region.region == AdoptionRegion::none);
  CHECK(check_incentive_ordering(gen::cfg_a(), o).which == OrderingCase::not_applicable);
}

TEST_CASE("expected incremental profit against a sure rival is the d = 1 value") {
  const OpeningOutcome o = solve_opening_stage(gen::cfg_a());
  CHECK(o.expected_incremental(Firm::old_firm, 1.0) == o.incremental_old[1]);
  CHECK(o.expected_incremental(Firm::new_firm, 1.0) == o.incremental_new[1]);
  CHECK(o.expected_incremental(Firm::old_firm, 0.0) == o.incremental_old[0]);
  CHECK(o.expected_incremental(Firm::old_firm, 0.5) ==
        doctest::Approx(0.5 * (o.incremental_old[0] + o.incremental_old[1])));
}

TEST_CASE("reference effects") {
  const OpeningOutcome o = solve_opening_stage(gen::cfg_a());
  const EffectsBreakdown& e0 = o.effects[0];
  CHECK(e0.cost_reduction == doctest::Approx(0.035));
  REQUIRE(e0.m_c);
  CHECK(*e0.m_c == doctest::Approx(1.0));
  CHECK(e0.cost_reduction_present);
  CHECK_FALSE(e0.market_penetration_present);
  CHECK_FALSE(e0.price_discrimination_present);
  CHECK(e0.business_creating == doctest::Approx(0.04));

  const EffectsBreakdown& e1 = o.effects[1];
  CHECK(e1.cost_reduction == doctest::Approx(0.018875));
  CHECK(e1.price_discrimination == doctest::Approx(0.00275));
  CHECK(e1.market_penetration == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(e1.m_c);
  CHECK(*e1.m_c == doctest::Approx(2.0));
  CHECK(e1.cost_reduction_present);
  CHECK(e1.price_discrimination_present);
  CHECK_FALSE(e1.market_penetration_present);
  CHECK(e1.business_creating == doctest::Approx(0.04));
  CHECK(std::abs(e1.old_identity_residual) < 1e-12);
}

TEST_CASE("effects add up to the incremental profits") {
  gen::Rng rng(61);
  for (int k = 0; k < 300; ++k) {
    const MarketConfig c = gen::random_feasible(rng);
    const OpeningOutcome o = solve_opening_stage(c);
    for (int d : {0, 1}) {
      const EffectsBreakdown& e = o.effects[d];
      CHECK(std::abs(e.old_identity_residual) <= 1e-9);
      CHECK(std::abs(e.new_identity_residual) <= 1e-9);
      // Absent effects contribute nothing.
      if (!e.market_penetration_present) CHECK(std::abs(e.market_penetration) <= 1e-12);
      if (!e.price_discrimination_present) CHECK(std::abs(e.price_discrimination) <= 1e-12);
      if (!e.cost_reduction_present) CHECK(std::abs(e.cost_reduction) <= 1e-12);
      // Symmetric costs: cost reduction is never negative.
      CHECK(e.cost_reduction >= -1e-12);
    }
  }
}

TEST_CASE("every config has an equilibrium") {
  gen::Rng rng(62);
  int mixed = 0;
  for (int k = 0; k < 1000; ++k) {
    const MarketConfig c = gen::random_feasible(rng);
    const OpeningOutcome o = solve_opening_stage(c);
    CHECK((!o.pure_equilibria.empty() || o.mixed_equilibrium.has_value()));
    if (o.pure_equilibria.empty()) ++mixed;
    CHECK(o.payoff_new[1][1] <= o.payoff_new[1][0] + 1e-12);
  }
  MESSAGE("configs with only a mixed equilibrium: " << mixed);
}

TEST_CASE("mixed equilibrium of a game without pure equilibria") {
  ProfileTable<double> vn{};
  ProfileTable<double> vo{};
  vn[1][0] = 1.0;
  vn[1][1] = -3.0;
  vo[0][1] = -1.0;
  vo[1][1] = 2.0;
  const BimatrixSolution sol = solve_opening_game(vn, vo);
  CHECK(sol.pure.empty());
  REQUIRE(sol.mixed);
  CHECK(sol.mixed->prob_old_opens == doctest::Approx(0.25));
  CHECK(sol.mixed->prob_new_opens == doctest::Approx(1.0 / 3.0));
  // Each firm is indifferent given the other's mixture.
  const double q_o = sol.mixed->prob_old_opens;
  const double q_n = sol.mixed->prob_new_opens;
  CHECK(q_o * vn[1][1] + (1 - q_o) * vn[1][0] ==
        doctest::Approx(q_o * vn[0][1] + (1 - q_o) * vn[0][0]));
  CHECK(q_n * vo[1][1] + (1 - q_n) * vo[0][1] ==
        doctest::Approx(q_n * vo[1][0] + (1 - q_n) * vo[0][0]));
}

TEST_CASE("indifference resolves to opening") {
  ProfileTable<double> vn{};
  ProfileTable<double> vo{};
  const BimatrixSolution sol = solve_opening_game(vn, vo);
  REQUIRE(sol.pure.size() == 1);
  CHECK(sol.pure[0] == OpeningProfile{true, true});
}

TEST_CASE("anti-coordination game lists both equilibria") {
  ProfileTable<double> vn{};
  ProfileTable<double> vo{};
  vn[1][0] = 1.0;
  vn[1][1] = -1.0;
  vo[0][1] = 1.0;
  vo[1][1] = -1.0;
  const BimatrixSolution sol = solve_opening_game(vn, vo);
  CHECK(sol.pure.size() == 2);
  OpeningOutcome o;
  o.pure_equilibria = sol.pure;
  CHECK(selected_profile(o) == OpeningProfile{true, false});
}

TEST_CASE("small cost reduction orderings") {
  MarketConfig c = gen::cfg_a();
  c.delta_c = 0.1;
  c.delta_delivery = 0.0405;
  REQUIRE(check_feasibility(c, false).hard_ok);
  const OpeningOutcome o = solve_opening_stage(c);
  const IncentiveOrderingReport rep = check_incentive_ordering(c, o);
  CHECK(rep.which == OrderingCase::small_cost_reduction);
  CHECK(rep.holds);
  CHECK(o.region.region == AdoptionRegion::small_cost_reduction);
  CHECK(o.region.agrees);
}

TEST_CASE("large cost reduction orderings") {
  MarketConfig c = gen::cfg_a();
  c.delta_c = 0.3;
  c.lambda = 0.9;
  REQUIRE(check_feasibility(c, false).hard_ok);
  const OpeningOutcome o = solve_opening_stage(c);
  REQUIRE(o.equilibrium({true, false}).regime == Regime::competing);
  const IncentiveOrderingReport rep = check_incentive_ordering(c, o);
  CHECK(rep.which == OrderingCase::large_cost_reduction);
  CHECK(rep.holds);
}

TEST_CASE("large cost reduction keeps the new firm out when set-up is costly") {
  MarketConfig c = gen::cfg_a();
  c.delta_c = 0.3;
  c.K = 0.053;
  REQUIRE(check_feasibility(c, false).hard_ok);
  const OpeningOutcome o = solve_opening_stage(c);
  CHECK(o.payoff_new[1][0] < 0.0);
  CHECK(o.incremental_old[0] >= 0.0);
  REQUIRE(o.pure_equilibria.size() == 1);
  CHECK(o.pure_equilibria[0] == OpeningProfile{false, true});
  if (o.region.region == AdoptionRegion::large_cost_reduction) {
    REQUIRE(o.region.predicted);
    CHECK(*o.region.predicted == OpeningProfile{false, true});
  }
  CHECK(o.region.agrees);
}

TEST_CASE("region labels agree with the solved game") {
  gen::Rng rng(63);
  int small = 0, large = 0;
  for (int k = 0; k < 1000; ++k) {
    const MarketConfig c = gen::random_feasible(rng);
    const OpeningOutcome o = solve_opening_stage(c);
    if (o.region.predicted) {
      CHECK(o.region.agrees);
      CHECK(has_profile(o, *o.region.predicted));
      small += o.region.region == AdoptionRegion::small_cost_reduction;
      large += o.region.region == AdoptionRegion::large_cost_reduction;
    }
    const IncentiveOrderingReport rep = check_incentive_ordering(c, o);
    if (rep.which != OrderingCase::not_applicable) {
      CAPTURE(rep.detail);
      CHECK(rep.holds);
    }
  }
  CHECK(small > 50);
  CHECK(large > 10);
}

TEST_CASE("set-up cost shifts payoffs one for one") {
  gen::Rng rng(64);
  for (int k = 0; k < 50; ++k) {
    MarketConfig c = gen::random_feasible(rng);
    const OpeningOutcome lo = solve_opening_stage(c);
    c.K += 0.01;
    const OpeningOutcome hi = solve_opening_stage(c);
    for (int d : {0, 1}) {
      CHECK(hi.incremental_new[d] == doctest::Approx(lo.incremental_new[d] - 0.01));
      CHECK(hi.incremental_old[d] == doctest::Approx(lo.incremental_old[d] - 0.01));
    }
  }
}

TEST_CASE("adoption incentives grow with access and cost reduction") {
  MarketConfig base = gen::cfg_a();
  base.delta_delivery = 0.0405;
  const double dc_max = delta_c_hat(1.5, base);
  const int n = 25;
  auto solve_at = [&](double lambda, double dc) {
    MarketConfig c = base;
    c.lambda = lambda;
    c.delta_c = dc;
    return solve_opening_stage(c);
  };
  auto lambda_at = [&](int i) { return 0.02 + 0.98 * i / (n - 1); };
  auto dc_at = [&](int j) { return 0.004 + (dc_max - 0.005) * j / (n - 1); };

  std::vector<std::vector<OpeningOutcome>> grid(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) grid[i].push_back(solve_at(lambda_at(i), dc_at(j)));
  }
  auto regime10 = [](const OpeningOutcome& o) {
    return o.equilibrium({true, false}).regime;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const OpeningOutcome& o = grid[i][j];
      CAPTURE(i);
      CAPTURE(j);
      if (i + 1 < n) {
        const OpeningOutcome& up = grid[i + 1][j];
        CHECK(up.incremental_old[1] >= o.incremental_old[1] - 1e-12);
        if (regime10(up) == regime10(o)) {
          CHECK(up.payoff_new[1][0] >= o.payoff_new[1][0] - 1e-12);
        }
      }
      if (j + 1 < n) {
        const OpeningOutcome& right = grid[i][j + 1];
        CHECK(right.incremental_old[1] >= o.incremental_old[1] - 1e-12);
        CHECK(right.payoff_new[1][0] >= o.payoff_new[1][0] - 1e-12);
      }
    }
  }
}
