#include "emarket/commands.hpp"

#include <atomic>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "emarket/dominance.hpp"
#include "emarket/simulation.hpp"
#include "emarket/thresholds.hpp"

namespace emarket {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json opt_num(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json per_shop(const PerShop<std::optional<double>>& v) {
  json j = json::object();
  for (ShopId s : kAllShops) {
    if (v[s]) j[std::string(to_string(s))] = *v[s];
  }
  return j;
}

json per_shop_open(const PerShop<double>& v, OpeningProfile a) {
  json j = json::object();
  for (ShopId s : kAllShops) {
    if (a.has(s)) j[std::string(to_string(s))] = v[s];
  }
  return j;
}

json config_json(const MarketConfig& cfg, GoodsMode mode) {
  return {{"demand", {{"intercept", cfg.demand.intercept},
                      {"slope", cfg.demand.slope}}},
          {"lambda", cfg.lambda},
          {"c_p", cfg.c_p},
          {"delta_c", cfg.delta_c},
          {"K", cfg.K},
          {"sigma", cfg.sigma},
          {"delta_sigma", cfg.delta_sigma},
          {"delta", cfg.delta_delivery},
          {"e", cfg.e_loss},
          {"mode", mode == GoodsMode::info_goods ? "info_goods" : "standard"}};
}

json feasibility_json(const FeasibilityReport& f) {
  json restrictions = json::array();
  for (const auto& r : f.restrictions) {
    restrictions.push_back(
        {{"name", r.name}, {"satisfied", r.satisfied}, {"slack", r.slack}});
  }
  return {{"hard_ok", f.hard_ok},
          {"surplus_warning", f.surplus_warning},
          {"delta_interval", {f.delta_lo, f.delta_hi}},
          {"restrictions", restrictions}};
}

std::string infeasibility_message(const FeasibilityReport& f) {
  std::ostringstream os;
  os.precision(10);
  os << "configuration violates hard restrictions:";
  for (const auto& r : f.restrictions) {
    if (!r.satisfied) os << " [" << r.name << ", slack " << r.slack << "]";
  }
  os << "; admissible delta interval (" << f.delta_lo << ", " << f.delta_hi
     << ")";
  return os.str();
}

SolveOptions solve_options(GoodsMode mode, const CommandOptions& opts) {
  SolveOptions s;
  s.info_goods = mode == GoodsMode::info_goods;
  s.vo_rule = opts.literal_s5_rule ? VoPricingRule::literal_marginal_cost
                                   : VoPricingRule::reservation_capped;
  s.enforce_search_assumption = !opts.override_feasibility;
  return s;
}

json profile_json(const FixedPointResult& fp) {
  const auto& eq = fp.equilibrium;
  json steps = json::array();
  for (const auto& st : fp.reservations.step_thresholds) {
    steps.push_back({{"step", st.step}, {"price", st.price}});
  }
  json orderings = json::array();
  for (const auto& o : fp.orderings) {
    orderings.push_back(
        {{"name", o.name}, {"applicable", o.applicable}, {"holds", o.holds}});
  }
  return {{"profile", profile_label(eq.profile)},
          {"regime", to_string(eq.regime)},
          {"alpha", eq.alpha},
          {"prices", per_shop(eq.prices)},
          {"reservations", per_shop(fp.reservations.r)},
          {"physical_step_thresholds", steps},
          {"shares", per_shop_open(eq.shares, eq.profile)},
          {"per_consumer_profit", per_shop(eq.per_consumer_profit)},
          {"approximate", eq.approximate},
          {"online_dispersion", opt_num(eq.online_dispersion)},
          {"iterations", fp.iterations},
          {"distinct_fixed_points", fp.distinct_fixed_points},
          {"orderings", orderings},
          {"warnings", fp.warnings}};
}

json table_json(const ProfileTable<double>& t) {
  json j = json::object();
  for (OpeningProfile a : kAllProfiles) j[profile_label(a)] = at(t, a);
  return j;
}

json effects_json(const EffectsBreakdown& fx) {
  return {{"given_rival_action", fx.given_rival_action},
          {"business_creating", fx.business_creating},
          {"cost_reduction", fx.cost_reduction},
          {"market_penetration", fx.market_penetration},
          {"price_discrimination", fx.price_discrimination},
          {"cost_reduction_share", fx.cost_reduction_share},
          {"market_penetration_share", fx.market_penetration_share},
          {"m_c", opt_num(fx.m_c)},
          {"m_p", opt_num(fx.m_p)},
          {"present",
           {{"cost_reduction", fx.cost_reduction_present},
            {"market_penetration", fx.market_penetration_present},
            {"price_discrimination", fx.price_discrimination_present}}},
          {"old_identity_residual", fx.old_identity_residual},
          {"new_identity_residual", fx.new_identity_residual}};
}

json distribution_json(const TransactionDistribution& d) {
  json atoms = json::array();
  for (const auto& a : d.atoms) atoms.push_back({a.price, a.mass});
  return atoms;
}

json dominance_json(const OpeningOutcome& out,
                    TransactionDistribution (*make)(const PriceEquilibrium&)) {
  json dists = json::object();
  std::vector<TransactionDistribution> ds;
  for (OpeningProfile a : kAllProfiles) {
    ds.push_back(make(out.equilibrium(a)));
    dists[profile_label(a)] = distribution_json(ds.back());
  }
  json pairs = json::array();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t k = i + 1; k < ds.size(); ++k) {
      const DominanceResult r = fosd(ds[i], ds[k]);
      pairs.push_back({{"F", profile_label(ds[i].profile)},
                       {"G", profile_label(ds[k].profile)},
                       {"relation", to_string(r.relation)},
                       {"strict", r.strict}});
    }
  }
  return {{"distributions", dists}, {"comparisons", pairs}};
}

json opening_json(const MarketConfig& cfg, const OpeningOutcome& out) {
  json pure = json::array();
  for (OpeningProfile a : out.pure_equilibria) pure.push_back(profile_label(a));
  json mixed = nullptr;
  if (out.mixed_equilibrium) {
    mixed = {{"prob_new_opens", out.mixed_equilibrium->prob_new_opens},
             {"prob_old_opens", out.mixed_equilibrium->prob_old_opens}};
  }
  const auto sel = selected_profile(out);
  const IncentiveOrderingReport ord = check_incentive_ordering(cfg, out);
  return {{"pure_equilibria", pure},
          {"mixed_equilibrium", mixed},
          {"a_star", sel ? json(profile_label(*sel)) : json(nullptr)},
          {"no_entry_warning", out.no_entry_warning},
          {"region",
           {{"label", to_string(out.region.region)},
            {"predicted", out.region.predicted
                              ? json(profile_label(*out.region.predicted))
                              : json(nullptr)},
            {"agrees", out.region.agrees}}},
          {"incentive_ordering",
           {{"case", to_string(ord.which)},
            {"holds", ord.holds},
            {"detail", ord.detail}}}};
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ModelError& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitModel;
  }
}

// Returns false (after reporting) when the run must stop at infeasibility.
bool admit(const Scenario& sc, const CommandOptions& opts, std::ostream& err) {
  const FeasibilityReport f = check_feasibility(sc.market, sc.info_goods());
  if (f.hard_ok) return true;
  if (opts.override_feasibility) {
    err << "warning: " << infeasibility_message(f) << "\n";
    return true;
  }
  err << "error (infeasible): " << infeasibility_message(f)
      << "; pass --override-feasibility to solve anyway\n";
  return false;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse_error:
    case ErrorKind::invalid_config:
    case ErrorKind::degenerate_demand:
      return kExitParse;
    case ErrorKind::non_convergence:
      return kExitNonConvergence;
    default:
      return kExitModel;
  }
}

json solve_report(const Scenario& sc, const CommandOptions& opts) {
  const MarketConfig& cfg = sc.market;
  const FeasibilityReport feas = check_feasibility(cfg, sc.info_goods());
  const OpeningOutcome out =
      solve_opening_stage(cfg, solve_options(sc.mode, opts));

  const double r_p10 = out.subgames[1][0].reservations.at(ShopId::p);
  std::optional<double> lam_hat;
  if (r_p10 > cfg.c_p && r_p10 < monopoly_price(cfg.c_p, cfg.demand)) {
    lam_hat = lambda_hat(r_p10, cfg);
  }
  const PricingThresholds th = PricingThresholds::compute(cfg);
  json thresholds = {
      {"p_hat_p", monopoly_price(cfg.c_p, cfg.demand)},
      {"p_hat_v", monopoly_price(cfg.c_v(), cfg.demand)},
      {"p_hat_vo", monopoly_price(cfg.c_vo(), cfg.demand)},
      {"p_os", th.p_o_s},
      {"p_ms", opt_num(th.p_m_s)},
      {"delta_c_crit", delta_c_crit(cfg)},
      {"delta_c_hat_32", delta_c_hat(1.5, cfg)},
      {"r_p_10", r_p10},
      {"lambda_hat", opt_num(lam_hat)}};

  json profiles = json::array();
  for (OpeningProfile a : kAllProfiles) {
    profiles.push_back(profile_json(at(out.subgames, a)));
  }
  return {{"config", config_json(cfg, sc.mode)},
          {"feasibility", feasibility_json(feas)},
          {"feasibility_overridden", !feas.hard_ok},
          {"thresholds", thresholds},
          {"profiles", profiles},
          {"payoffs", {{"new", table_json(out.payoff_new)},
                       {"old", table_json(out.payoff_old)}}},
          {"incrementals",
           {{"new_given_0", out.incremental_new[0]},
            {"new_given_1", out.incremental_new[1]},
            {"old_given_0", out.incremental_old[0]},
            {"old_given_1", out.incremental_old[1]}}},
          {"effects", {effects_json(out.effects[0]), effects_json(out.effects[1])}},
          {"opening", opening_json(cfg, out)},
          {"dominance",
           {{"transaction_weighted", dominance_json(out, transaction_distribution)},
            {"posted_price", dominance_json(out, posted_price_distribution)}}}};
}

json simulate_report(const Scenario& sc, const CommandOptions& opts) {
  const MarketConfig& cfg = sc.market;
  const SolveOptions so = solve_options(sc.mode, opts);
  json profiles = json::array();
  for (OpeningProfile a : kAllProfiles) {
    const FixedPointResult fp = solve_fixed_point(a, cfg, so);
    SimConfig sim;
    sim.n_agents = opts.agents;
    sim.seed = opts.seed;
    sim.workers = opts.workers;
    sim.market = cfg;
    sim.equilibrium = fp.equilibrium;
    sim.reservations = fp.reservations;
    const SimReport rep = simulate(sim);

    json shares = json::array();
    for (ShopId s : kAllShops) {
      if (!a.has(s)) continue;
      shares.push_back({{"shop", to_string(s)},
                        {"analytic", rep.analytic_shares[s]},
                        {"empirical", rep.empirical_shares[s]},
                        {"new_buyers", rep.new_buyers[s]},
                        {"old_buyers", rep.old_buyers[s]},
                        {"z", opt_num(rep.share_z_scores[s])}});
    }
    profiles.push_back(
        {{"profile", profile_label(a)},
         {"regime", to_string(fp.equilibrium.regime)},
         {"prices", per_shop(fp.equilibrium.prices)},
         {"shares", shares},
         {"mean_search_steps", rep.mean_search_steps},
         {"max_search_steps", rep.max_search_steps},
         {"search_steps_bound", rep.search_steps_bound},
         {"mean_steps_by_first_shop", per_shop(rep.mean_steps_by_first_shop)},
         {"new_surplus", {{"mean", rep.new_surplus.mean}, {"min", rep.new_surplus.min}}},
         {"old_surplus", {{"mean", rep.old_surplus.mean}, {"min", rep.old_surplus.min}}},
         {"max_expenditure", rep.max_expenditure},
         {"expenditure_bound", rep.expenditure_bound},
         {"n_new", rep.n_new},
         {"n_old", rep.n_old}});
  }
  std::int64_t n_new = std::llround(double(opts.agents) * cfg.lambda);
  return {{"config", config_json(cfg, sc.mode)},
          {"n_agents", opts.agents},
          {"seed", opts.seed},
          {"rng", "mt19937_64 per 4096-agent block, block seed "
                  "splitmix64(seed + (block+1)*0x9E3779B97F4A7C15)"},
          {"lambda_rounding", "new consumers = round(n_agents * lambda) = " +
                                  std::to_string(n_new)},
          {"profiles", profiles}};
}

std::string sweep_row(const MarketConfig& cfg, GoodsMode mode,
                      const CommandOptions& opts) {
  std::string row = fmt(cfg.lambda) + "," + fmt(cfg.delta_c) + "," + fmt(cfg.K);
  auto failed = [&](std::string_view status) {
    return row + ",,,,,,,,,,,,," + std::string(status);
  };
  try {
    validate(cfg);
  } catch (const ModelError& e) {
    return failed(to_string(e.kind()));
  }
  const FeasibilityReport feas =
      check_feasibility(cfg, mode == GoodsMode::info_goods);
  if (!feas.hard_ok && !opts.override_feasibility) return failed("infeasible");
  try {
    const OpeningOutcome out = solve_opening_stage(cfg, solve_options(mode, opts));
    const auto& eq10 = out.equilibrium({true, false});
    const auto& eq11 = out.equilibrium({true, true});
    const PricingThresholds th = PricingThresholds::compute(cfg);
    std::string a_n, a_o, status = feas.hard_ok ? "ok" : "ok_overridden";
    if (const auto sel = selected_profile(out)) {
      a_n = sel->new_opens ? "1" : "0";
      a_o = sel->old_opens ? "1" : "0";
      if (out.pure_equilibria.size() > 1) status += "_multiple";
    } else if (out.mixed_equilibrium) {
      a_n = fmt(out.mixed_equilibrium->prob_new_opens);
      a_o = fmt(out.mixed_equilibrium->prob_old_opens);
      status += "_mixed";
    }
    for (OpeningProfile a : kAllProfiles) {
      if (!at(out.subgames, a).warnings.empty()) {
        status += "_search_assumption_violated";
        break;
      }
    }
    row += "," + fmt(out.subgames[1][0].reservations.at(ShopId::p));
    row += "," + std::string(to_string(eq10.regime));
    row += "," + std::string(to_string(eq11.regime));
    row += "," + fmt(eq10.price(ShopId::p));
    row += "," + fmt(eq11.price(ShopId::p));
    row += "," + fmt(th.p_o_s);
    row += "," + (th.p_m_s ? fmt(*th.p_m_s) : std::string());
    row += "," + a_n + "," + a_o;
    row += "," + fmt(out.payoff_new[1][0]);
    row += "," + fmt(out.payoff_old[1][1]);
    row += "," + fmt(out.incremental_old[1]);
    row += "," + status;
    return row;
  } catch (const ModelError& e) {
    return failed(to_string(e.kind()));
  } catch (const std::exception&) {
    return failed("error");
  }
}

int run_solve(const std::filesystem::path& path, const CommandOptions& opts,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(path);
    if (!admit(sc, opts, err)) return int(kExitInfeasible);
    out << solve_report(sc, opts).dump(2) << "\n";
    return int(kExitOk);
  });
}

int run_check(const std::filesystem::path& path, const CommandOptions& opts,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(path);
    const FeasibilityReport f = check_feasibility(sc.market, sc.info_goods());
    out << feasibility_json(f).dump(2) << "\n";
    if (!f.hard_ok && !opts.override_feasibility) {
      err << "error (infeasible): " << infeasibility_message(f) << "\n";
      return int(kExitInfeasible);
    }
    return int(kExitOk);
  });
}

int run_simulate(const std::filesystem::path& path, const CommandOptions& opts,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(path);
    if (opts.agents < 1) {
      throw ModelError(ErrorKind::parse_error, "--agents must be at least 1");
    }
    if (!admit(sc, opts, err)) return int(kExitInfeasible);
    out << simulate_report(sc, opts).dump(2) << "\n";
    return int(kExitOk);
  });
}

int run_sweep(const std::filesystem::path& path, const CommandOptions& opts,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(path);
    if (!sc.sweep) {
      throw ModelError(ErrorKind::parse_error,
                       "scenario has no 'sweep' block");
    }
    const SweepSpec& spec = *sc.sweep;
    const std::size_t n = spec.point_count();
    std::vector<std::string> rows(n);
    auto point = [&](std::size_t idx) {
      MarketConfig cfg = sc.market;
      // Row-major: the last axis varies fastest.
      std::size_t rem = idx;
      for (std::size_t k = spec.axes.size(); k-- > 0;) {
        const SweepAxis& ax = spec.axes[k];
        const int i = static_cast<int>(rem % ax.steps);
        rem /= ax.steps;
        set_param(cfg, ax.param, ax.value(i));
      }
      rows[idx] = sweep_row(cfg, sc.mode, opts);
    };
    unsigned workers = opts.workers ? opts.workers
                                    : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) point(i);
      });
    }
    for (auto& th : pool) th.join();
    out << kSweepHeader << "\n";
    for (const auto& r : rows) out << r << "\n";
    return int(kExitOk);
  });
}

}  // namespace emarket
