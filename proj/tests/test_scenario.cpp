#include <doctest.h>

#include <string>

#include "emarket/scenario.hpp"

using namespace emarket;

namespace {

const std::string kBase = R"({"demand": {"intercept": 1, "slope": 1},
  "lambda": 0.5, "c_p": 0.4, "delta_c": 0.2, "K": 0.01,
  "sigma": 0.05, "delta_sigma": 0.04, "delta": 0.05)";

ErrorKind kind_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ModelError& e) {
    return e.kind();
  }
  FAIL("parse succeeded");
  return ErrorKind::parse_error;
}

std::string message_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ModelError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal scenario") {
  const Scenario sc = parse_scenario(kBase + "}");
  CHECK(sc.market.lambda == 0.5);
  CHECK(sc.market.delta_delivery == 0.05);
  CHECK(sc.market.e_loss == 0.0);
  CHECK(sc.mode == GoodsMode::standard);
  CHECK_FALSE(sc.sweep);
}

TEST_CASE("mode and efficiency loss") {
  const Scenario sc = parse_scenario(kBase + R"(, "e": 0.5, "mode": "info_goods"})");
  CHECK(sc.market.e_loss == 0.5);
  CHECK(sc.info_goods());
  CHECK(kind_of(kBase + R"(, "mode": "digital"})") == ErrorKind::parse_error);
}

TEST_CASE("schema errors name the key") {
  CHECK(message_of(kBase + R"(, "gamma": 1})").find("gamma") != std::string::npos);
  const std::string no_sigma = R"({"demand": {"intercept": 1, "slope": 1},
    "lambda": 0.5, "c_p": 0.4, "delta_c": 0.2, "K": 0.01,
    "delta_sigma": 0.04, "delta": 0.05})";
  CHECK(kind_of(no_sigma) == ErrorKind::parse_error);
  CHECK(message_of(no_sigma).find("sigma") != std::string::npos);
  CHECK(kind_of(kBase + R"(, "lambda": "half"})") == ErrorKind::parse_error);
  CHECK(kind_of("{\"demand\": ") == ErrorKind::parse_error);
  CHECK(kind_of("[1, 2]") == ErrorKind::parse_error);
}

TEST_CASE("values must satisfy config invariants") {
  const std::string bad = R"({"demand": {"intercept": 1, "slope": 1},
    "lambda": 1.5, "c_p": 0.4, "delta_c": 0.2, "K": 0.01,
    "sigma": 0.05, "delta_sigma": 0.04, "delta": 0.05})";
  CHECK(kind_of(bad) == ErrorKind::invalid_config);
}

TEST_CASE("sweep block") {
  const Scenario sc = parse_scenario(kBase + R"(, "sweep": {"axes": [
      {"param": "lambda", "min": 0.1, "max": 1.0, "steps": 10},
      {"param": "delta_c", "min": 0.01, "max": 0.13, "steps": 5}]}})");
  REQUIRE(sc.sweep);
  CHECK(sc.sweep->axes.size() == 2);
  CHECK(sc.sweep->point_count() == 50);
  const SweepAxis& ax = sc.sweep->axes[0];
  CHECK(ax.value(0) == 0.1);
  CHECK(ax.value(9) == 1.0);
  CHECK(ax.value(3) == doctest::Approx(0.4));

  CHECK(kind_of(kBase + R"(, "sweep": {"axes": []}})") == ErrorKind::parse_error);
  CHECK(kind_of(kBase + R"(, "sweep": {"axes": [
      {"param": "rho", "min": 0, "max": 1, "steps": 2}]}})") == ErrorKind::parse_error);
  CHECK(kind_of(kBase + R"(, "sweep": {"axes": [
      {"param": "K", "min": 1, "max": 0, "steps": 2}]}})") == ErrorKind::parse_error);
  CHECK(kind_of(kBase + R"(, "sweep": {"axes": [
      {"param": "K", "min": 0, "max": 1, "steps": 0}]}})") == ErrorKind::parse_error);
  CHECK(kind_of(kBase + R"(, "sweep": {"axes": [
      {"param": "K", "min": 0, "max": 1, "steps": 2},
      {"param": "K", "min": 0, "max": 1, "steps": 2}]}})") == ErrorKind::parse_error);
  CHECK(kind_of(kBase + R"(, "sweep": {"axes": [
      {"param": "K", "min": 0, "max": 1, "steps": 2000},
      {"param": "lambda", "min": 0, "max": 1, "steps": 2000}]}})") == ErrorKind::parse_error);
}

TEST_CASE("parameters by name") {
  MarketConfig c;
  set_param(c, "delta", 0.03);
  set_param(c, "e", 0.2);
  set_param(c, "K", 0.02);
  CHECK(c.delta_delivery == 0.03);
  CHECK(c.e_loss == 0.2);
  CHECK(c.K == 0.02);
  CHECK(is_sweep_param("delta_sigma"));
  CHECK_FALSE(is_sweep_param("demand"));
  CHECK_THROWS_AS(set_param(c, "rho", 1.0), ModelError);
}

TEST_CASE("missing file") {
  try {
    load_scenario("/nonexistent/scenario.json");
    FAIL("expected parse_error");
  } catch (const ModelError& e) {
    CHECK(e.kind() == ErrorKind::parse_error);
  }
}
