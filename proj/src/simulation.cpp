#include "emarket/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

namespace emarket {

namespace {

constexpr std::int64_t kBlockSize = 4096;
constexpr double kAcceptTolerance = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform integer in [0, n) by rejection, independent of the standard
// library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

using Mask = unsigned;

Mask bit(ShopId shop) { return 1u << static_cast<unsigned>(shop); }

// Reservation price of a held offer at shop `held` against every subset of
// unvisited shops, evaluated at the anticipated prices.
struct ReservationTable {
  std::array<std::array<double, 8>, 3> r{};

  ReservationTable(const PriceEquilibrium& eq, const MarketConfig& cfg) {
    for (ShopId held : kAllShops) {
      for (Mask m = 1; m < 8; ++m) {
        std::vector<Offer> unvisited;
        for (ShopId s : kAllShops) {
          if ((m & bit(s)) && s != held && eq.prices[s]) {
            unvisited.push_back({s, *eq.prices[s]});
          }
        }
        double value = std::numeric_limits<double>::quiet_NaN();
        if (!unvisited.empty() && unvisited.size() <= 2) {
          try {
            value = reservation_price(unvisited, held, cfg);
          } catch (const ModelError& e) {
            if (e.kind() != ErrorKind::no_acceptance) throw;
            value = -std::numeric_limits<double>::infinity();
          }
        }
        r[static_cast<int>(held)][m] = value;
      }
    }
  }
  double at(ShopId held, Mask unvisited) const {
    return r[static_cast<int>(held)][unvisited];
  }
};

struct Tally {
  PerShop<std::int64_t> buyers{};
  std::int64_t steps = 0;
  int max_steps = 0;
  PerShop<std::int64_t> first_count{};
  PerShop<std::int64_t> first_steps{};
  double surplus_sum = 0.0;
  double surplus_min = std::numeric_limits<double>::infinity();
  double max_expenditure = 0.0;
};

struct Scene {
  const MarketConfig& cfg;
  const PriceEquilibrium& eq;
  const ReservationTable& table;
  std::vector<ShopId> sites;
  PerShop<double> net{};
};

void run_block(const Scene& sc, std::uint64_t seed, std::int64_t block,
               std::int64_t count, Tally& t) {
  std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(block + 1) *
                                            0x9E3779B97F4A7C15ULL));
  const double visit = sc.cfg.web_visit_cost();
  std::vector<ShopId> order = sc.sites;
  const std::size_t n = order.size();
  for (std::int64_t i = 0; i < count; ++i) {
    for (std::size_t k = n; k > 1; --k) {
      std::swap(order[k - 1], order[uniform_below(rng, k)]);
    }
    Mask unvisited = 0;
    for (ShopId s : order) unvisited |= bit(s);

    ShopId held = order.front();
    int steps = 0;
    bool bought = false;
    for (std::size_t k = 0; k < n; ++k) {
      const ShopId here = order[k];
      unvisited &= ~bit(here);
      ++steps;
      if (k == 0 || sc.net[here] > sc.net[held]) held = here;
      const double price = *sc.eq.prices[held];
      if (unvisited == 0) {
        if (price > sc.cfg.demand.choke_price() + kTolerance) break;
        bought = true;
        break;
      }
      if (price <= sc.table.at(held, unvisited) + kAcceptTolerance) {
        bought = true;
        break;
      }
    }
    if (!bought) {
      throw ModelError(ErrorKind::scenario_inconsistency,
                       "a new consumer found no acceptable offer in profile " +
                           profile_label(sc.eq.profile));
    }
    ++t.buyers[held];
    t.steps += steps;
    t.max_steps = std::max(t.max_steps, steps);
    ++t.first_count[order.front()];
    t.first_steps[order.front()] += steps;
    const double expenditure = steps * visit + purchase_cost(held, sc.cfg);
    t.max_expenditure = std::max(t.max_expenditure, expenditure);
    const double s = sc.net[held] - steps * visit;
    t.surplus_sum += s;
    t.surplus_min = std::min(t.surplus_min, s);
  }
}

}  // namespace

SimReport simulate(const SimConfig& sim) {
  if (sim.n_agents < 1) {
    throw ModelError(ErrorKind::invalid_config, "n_agents must be at least 1");
  }
  const MarketConfig& cfg = sim.market;
  const PriceEquilibrium& eq = sim.equilibrium;
  const OpeningProfile a = eq.profile;
  const DemandSpec& d = cfg.demand;

  SimReport rep;
  rep.n_agents = sim.n_agents;
  rep.seed = sim.seed;
  rep.rng = "mt19937_64 per 4096-agent block, block seed splitmix64(seed + (block+1)*0x9E3779B97F4A7C15)";
  rep.n_new = std::llround(static_cast<double>(sim.n_agents) * cfg.lambda);
  rep.n_old = sim.n_agents - rep.n_new;
  {
    std::ostringstream os;
    os.precision(17);
    os << "new consumers = round(n_agents * lambda) = " << rep.n_new
       << "; realised new fraction " << double(rep.n_new) / double(rep.n_agents);
    rep.lambda_rounding = os.str();
  }
  rep.analytic_shares = eq.shares;

  // Old consumers buy at the physical shop whenever its price is below the
  // choke price; the trip cost is sunk either way.
  const double p_p = eq.price(ShopId::p);
  const bool old_buy = p_p <= d.choke_price();
  rep.old_buyers[ShopId::p] = old_buy ? rep.n_old : 0;
  if (rep.n_old > 0) {
    const double s = (old_buy ? surplus(p_p, d) : 0.0) - cfg.sigma;
    rep.old_surplus = {s, s};
  }

  Tally total;
  if (rep.n_new > 0) {
    if (!a.any_virtual()) {
      // Without Web sites new consumers behave like old ones.
      total.buyers[ShopId::p] = old_buy ? rep.n_new : 0;
      total.steps = rep.n_new;
      total.max_steps = 1;
      total.first_count[ShopId::p] = rep.n_new;
      total.first_steps[ShopId::p] = rep.n_new;
      const double s = (old_buy ? surplus(p_p, d) : 0.0) - cfg.sigma;
      total.surplus_sum = s * double(rep.n_new);
      total.surplus_min = s;
      total.max_expenditure = cfg.sigma;
    } else {
      const ReservationTable table(eq, cfg);
      Scene scene{cfg, eq, table, {}, {}};
      for (ShopId s : kAllShops) {
        if (!a.has(s)) continue;
        scene.sites.push_back(s);
        scene.net[s] = net_surplus({s, *eq.prices[s]}, cfg);
      }
      const std::int64_t blocks = (rep.n_new + kBlockSize - 1) / kBlockSize;
      std::vector<Tally> tallies(static_cast<std::size_t>(blocks));
      unsigned workers = sim.workers ? sim.workers
                                     : std::max(1u, std::thread::hardware_concurrency());
      workers = static_cast<unsigned>(
          std::min<std::int64_t>(workers, blocks));
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::int64_t b = w; b < blocks; b += workers) {
              const std::int64_t count =
                  std::min(kBlockSize, rep.n_new - b * kBlockSize);
              run_block(scene, sim.seed, b, count, tallies[b]);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
      // Combine in block order so sums do not depend on the worker count.
      for (const Tally& t : tallies) {
        for (ShopId s : kAllShops) {
          total.buyers[s] += t.buyers[s];
          total.first_count[s] += t.first_count[s];
          total.first_steps[s] += t.first_steps[s];
        }
        total.steps += t.steps;
        total.max_steps = std::max(total.max_steps, t.max_steps);
        total.surplus_sum += t.surplus_sum;
        total.surplus_min = std::min(total.surplus_min, t.surplus_min);
        total.max_expenditure = std::max(total.max_expenditure, t.max_expenditure);
      }
    }
    rep.new_surplus = {total.surplus_sum / double(rep.n_new), total.surplus_min};
    rep.mean_search_steps = double(total.steps) / double(rep.n_new);
  }
  rep.new_buyers = total.buyers;
  rep.max_search_steps = total.max_steps;
  rep.max_expenditure = std::max(total.max_expenditure,
                                 rep.n_old > 0 ? cfg.sigma : 0.0);
  rep.search_steps_bound = a.site_count() - eq.alpha + 1;
  rep.expenditure_bound = rep.search_steps_bound * cfg.web_visit_cost() +
                          std::max(cfg.sigma, cfg.delta_delivery);

  for (ShopId s : kAllShops) {
    rep.empirical_shares[s] =
        double(rep.new_buyers[s] + rep.old_buyers[s]) / double(rep.n_agents);
    if (total.first_count[s] > 0) {
      rep.mean_steps_by_first_shop[s] =
          double(total.first_steps[s]) / double(total.first_count[s]);
    }
    if (!a.has(s)) continue;
    // New consumers' purchases are multinomial over the open shops.
    double q = eq.shares[s];
    if (s == ShopId::p && eq.shares[s] > 0.0) q -= 1.0 - cfg.lambda;
    q = cfg.lambda > 0.0 ? std::clamp(q / cfg.lambda, 0.0, 1.0) : 0.0;
    const double n = double(rep.n_new);
    const double dev = double(rep.new_buyers[s]) - n * q;
    const double var = n * q * (1.0 - q);
    if (var > 0.0) {
      rep.share_z_scores[s] = dev / std::sqrt(var);
    } else {
      rep.share_z_scores[s] =
          std::abs(dev) < 0.5 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), dev);
    }
  }
  return rep;
}

}  // namespace emarket
