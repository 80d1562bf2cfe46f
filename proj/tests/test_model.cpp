#include <doctest.h>

#include "emarket/model.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace emarket;

namespace {
const DemandSpec unit{};
}

TEST_CASE("demand at reference points") {
  CHECK(demand(0.6, unit) == doctest::Approx(0.4));
  CHECK(demand(1.0, unit) == 0.0);
  CHECK(demand(0.0, unit) == 1.0);
  CHECK(demand(1.7, unit) == 0.0);
}

TEST_CASE("profit at reference points") {
  CHECK(profit(0.7, 0.4, unit) == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(profit(0.6, 0.2, unit) == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(profit(0.3, 0.3, unit) == 0.0);
  CHECK(profit(0.2, 0.4, unit) < 0.0);
}

TEST_CASE("monopoly price") {
  CHECK(monopoly_price(0.4, unit) == doctest::Approx(0.7));
  CHECK(monopoly_price(0.2, unit) == doctest::Approx(0.6));

  // brute-force grid argmax
  double best = 0.0, best_pi = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    if (profit(p, 0.4, unit) > best_pi) {
      best_pi = profit(p, 0.4, unit);
      best = p;
    }
  }
  CHECK(std::abs(best - monopoly_price(0.4, unit)) <= 0.001);

  CHECK_THROWS_AS(monopoly_price(1.0, unit), ModelError);
  try {
    monopoly_price(1.2, unit);
  } catch (const ModelError& e) {
    CHECK(e.kind() == ErrorKind::degenerate_demand);
  }
}

TEST_CASE("surplus at reference points") {
  CHECK(surplus(0.6, unit) == doctest::Approx(0.08));
  CHECK(surplus(0.7, unit) == doctest::Approx(0.045));
  CHECK(surplus(1.0, unit) == 0.0);
  CHECK(surplus(1.3, unit) == 0.0);
}

TEST_CASE("surplus inverse round trip and range errors") {
  for (double p : {0.0, 0.1, 0.35, 0.6, 0.99}) {
    CHECK(surplus_inverse(surplus(p, unit), unit) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(surplus_inverse(0.0, unit) == 1.0);
  CHECK(surplus_inverse(-0.3, unit) == 1.0);
  try {
    surplus_inverse(0.6, unit);
    FAIL("expected no_acceptance");
  } catch (const ModelError& e) {
    CHECK(e.kind() == ErrorKind::no_acceptance);
  }
}

TEST_CASE("monopoly price maximises profit on a grid for sampled costs") {
  gen::Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    DemandSpec d{DemandKind::linear, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
    const double r = d.choke_price();
    const double c = rng.uniform(0.0, 0.99) * r;
    const double best = profit(monopoly_price(c, d), c, d);
    for (int i = 0; i <= 1000; ++i) {
      const double p = r * i / 1000.0;
      CHECK(best >= profit(p, c, d) - 1e-15);
    }
  }
}

TEST_CASE("monopoly price increases in cost") {
  double prev = -1.0;
  for (int i = 0; i < 100; ++i) {
    const double p = monopoly_price(i / 100.0, unit);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("surplus differences equal integrated demand") {
  gen::Rng rng(12);
  for (int k = 0; k < 50; ++k) {
    DemandSpec d{DemandKind::linear, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
    const double r = d.choke_price();
    double p = rng.uniform(0.0, r), q = rng.uniform(0.0, 1.2 * r);
    if (p > q) std::swap(p, q);
    const double integral =
        oracle::integrate([&](double t) { return demand(t, d); }, p, q, 20'000);
    CHECK(std::abs(surplus(p, d) - surplus(q, d) - integral) < 1e-9);
  }
}

TEST_CASE("surplus is convex and decreasing") {
  for (int i = 1; i < 99; ++i) {
    const double h = 0.01, p = i * h;
    CHECK(surplus(p + h, unit) < surplus(p, unit));
    CHECK(surplus(p - h, unit) + surplus(p + h, unit) >= 2 * surplus(p, unit) - 1e-15);
  }
}

TEST_CASE("surplus gap is positive for any cost reduction") {
  gen::Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    const MarketConfig c = gen::random_feasible(rng);
    CHECK(surplus_gap(c) > 0.0);
  }
}

TEST_CASE("config validation names the violated invariant") {
  auto kind_of = [](MarketConfig c) {
    try {
      validate(c);
    } catch (const ModelError& e) {
      return e.kind();
    }
    return ErrorKind::parse_error;
  };
  MarketConfig c;
  CHECK_NOTHROW(validate(c));
  c.lambda = 0.0;
  CHECK(kind_of(c) == ErrorKind::invalid_config);
  c = {};
  c.delta_c = 0.5;
  CHECK(kind_of(c) == ErrorKind::invalid_config);
  c = {};
  c.delta_sigma = 0.05;
  CHECK(kind_of(c) == ErrorKind::invalid_config);
  c = {};
  c.c_p = 0.55;  // above the zero-cost monopoly price 0.5
  CHECK(kind_of(c) == ErrorKind::invalid_config);
  c = {};
  c.demand.slope = 0.0;
  CHECK(kind_of(c) == ErrorKind::invalid_config);
  c = {};
  c.e_loss = 1.5;
  CHECK(kind_of(c) == ErrorKind::invalid_config);
}

TEST_CASE("derived costs") {
  MarketConfig c;
  CHECK(c.c_v() == doctest::Approx(0.2));
  CHECK(c.c_vo() == doctest::Approx(0.2));
  c.e_loss = 1.0;
  CHECK(c.c_vo() == doctest::Approx(0.4));
  c.e_loss = 0.5;
  CHECK(c.c_vo() == doctest::Approx(0.3));
  CHECK(unit_cost(ShopId::p, c) == 0.4);
  CHECK(unit_cost(ShopId::vn, c) == doctest::Approx(0.2));
  CHECK(unit_cost(ShopId::vo, c) == doctest::Approx(0.3));
  CHECK(purchase_cost(ShopId::p, c) == c.sigma);
  CHECK(purchase_cost(ShopId::vn, c) == c.delta_delivery);
}

TEST_CASE("profile labels") {
  CHECK(profile_label({false, false}) == "00");
  CHECK(profile_label({true, false}) == "10");
  CHECK(profile_label({false, true}) == "01");
  CHECK(profile_label({true, true}) == "11");
  CHECK(OpeningProfile{true, true}.site_count() == 3);
}
