#include "emarket/scenario.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace emarket {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxSweepPoints = 1'000'000;

constexpr std::array<std::string_view, 8> kSweepParams{
    "lambda", "delta_c", "K", "c_p", "sigma", "delta_sigma", "delta", "e"};

[[noreturn]] void fail(const std::string& msg) {
  throw ModelError(ErrorKind::parse_error, msg);
}

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail("unknown key '" + key + "' in " + std::string(where));
  }
}

const json& require(const json& obj, const std::string& key,
                    std::string_view where) {
  if (!obj.contains(key)) {
    fail("missing required key '" + key + "' in " + std::string(where));
  }
  return obj.at(key);
}

double number(const json& obj, const std::string& key, std::string_view where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) fail("key '" + key + "' must be a number");
  return v.get<double>();
}

SweepSpec parse_sweep(const json& j) {
  if (!j.is_object()) fail("key 'sweep' must be an object");
  reject_unknown(j, "sweep", {"axes"});
  const json& axes = require(j, "axes", "sweep");
  if (!axes.is_array() || axes.empty() || axes.size() > 2) {
    fail("key 'sweep.axes' must list 1 or 2 axes");
  }
  SweepSpec spec;
  std::set<std::string> seen;
  for (const json& ax : axes) {
    if (!ax.is_object()) fail("each entry of 'sweep.axes' must be an object");
    reject_unknown(ax, "sweep axis", {"param", "min", "max", "steps"});
    SweepAxis axis;
    const json& param = require(ax, "param", "sweep axis");
    if (!param.is_string()) fail("key 'param' must be a string");
    axis.param = param.get<std::string>();
    if (!is_sweep_param(axis.param)) {
      fail("unknown sweep param '" + axis.param + "'");
    }
    if (!seen.insert(axis.param).second) {
      fail("sweep param '" + axis.param + "' listed twice");
    }
    axis.min = number(ax, "min", "sweep axis");
    axis.max = number(ax, "max", "sweep axis");
    const json& steps = require(ax, "steps", "sweep axis");
    if (!steps.is_number_integer() || steps.get<long long>() < 1) {
      fail("key 'steps' must be a positive integer");
    }
    if (steps.get<long long>() > static_cast<long long>(kMaxSweepPoints)) {
      fail("key 'steps' exceeds the grid limit");
    }
    axis.steps = static_cast<int>(steps.get<long long>());
    if (axis.max < axis.min) fail("sweep axis '" + axis.param + "' has max < min");
    spec.axes.push_back(axis);
  }
  if (spec.point_count() > kMaxSweepPoints) {
    fail("sweep grid exceeds 1000000 points");
  }
  return spec;
}

}  // namespace

double SweepAxis::value(int i) const {
  if (steps <= 1) return min;
  if (i == steps - 1) return max;
  return min + (max - min) * double(i) / double(steps - 1);
}

std::size_t SweepSpec::point_count() const {
  std::size_t n = 1;
  for (const auto& ax : axes) n *= static_cast<std::size_t>(ax.steps);
  return n;
}

bool is_sweep_param(std::string_view name) {
  for (auto p : kSweepParams) {
    if (p == name) return true;
  }
  return false;
}

void set_param(MarketConfig& cfg, std::string_view name, double value) {
  if (name == "lambda") cfg.lambda = value;
  else if (name == "delta_c") cfg.delta_c = value;
  else if (name == "K") cfg.K = value;
  else if (name == "c_p") cfg.c_p = value;
  else if (name == "sigma") cfg.sigma = value;
  else if (name == "delta_sigma") cfg.delta_sigma = value;
  else if (name == "delta") cfg.delta_delivery = value;
  else if (name == "e") cfg.e_loss = value;
  else fail("unknown parameter '" + std::string(name) + "'");
}

Scenario parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(std::string("malformed scenario: ") + e.what());
  }
  if (!j.is_object()) fail("scenario must be an object");
  reject_unknown(j, "scenario",
                 {"demand", "lambda", "c_p", "delta_c", "K", "sigma",
                  "delta_sigma", "delta", "e", "mode", "sweep"});

  Scenario sc;
  MarketConfig& cfg = sc.market;
  const json& dem = require(j, "demand", "scenario");
  if (!dem.is_object()) fail("key 'demand' must be an object");
  reject_unknown(dem, "demand", {"intercept", "slope"});
  cfg.demand.intercept = number(dem, "intercept", "demand");
  cfg.demand.slope = number(dem, "slope", "demand");

  cfg.lambda = number(j, "lambda", "scenario");
  cfg.c_p = number(j, "c_p", "scenario");
  cfg.delta_c = number(j, "delta_c", "scenario");
  cfg.K = number(j, "K", "scenario");
  cfg.sigma = number(j, "sigma", "scenario");
  cfg.delta_sigma = number(j, "delta_sigma", "scenario");
  cfg.delta_delivery = number(j, "delta", "scenario");
  cfg.e_loss = j.contains("e") ? number(j, "e", "scenario") : 0.0;

  if (j.contains("mode")) {
    const json& m = j.at("mode");
    if (m == "standard") sc.mode = GoodsMode::standard;
    else if (m == "info_goods") sc.mode = GoodsMode::info_goods;
    else fail("key 'mode' must be \"standard\" or \"info_goods\"");
  }
  if (j.contains("sweep")) sc.sweep = parse_sweep(j.at("sweep"));

  validate(cfg);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace emarket
