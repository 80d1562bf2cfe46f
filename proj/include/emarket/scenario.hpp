#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emarket/model.hpp"

namespace emarket {

enum class GoodsMode { standard, info_goods };

struct SweepAxis {
  std::string param;
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  /// Grid value i of steps, endpoints included (min when steps == 1).
  double value(int i) const;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;

  std::size_t point_count() const;
};

struct Scenario {
  MarketConfig market{};
  GoodsMode mode = GoodsMode::standard;
  std::optional<SweepSpec> sweep;

  bool info_goods() const { return mode == GoodsMode::info_goods; }
};

/// Parameter names accepted by sweeps: lambda, delta_c, K, c_p, sigma,
/// delta_sigma, delta, e.
bool is_sweep_param(std::string_view name);

/// Sets a named scalar parameter. Throws parse_error for unknown names.
void set_param(MarketConfig& cfg, std::string_view name, double value);

/// Parses and validates a scenario document. Throws parse_error (with the
/// offending key in the message) or invalid_config.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace emarket
