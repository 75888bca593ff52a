#include "gfg/psae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gfg {

namespace {

void require_hedonic(const UtilitySpec& spec, const char* what) {
  if (!spec.penalty.is_none())
    throw std::invalid_argument(std::string(what) +
                                ": requires a hedonic spec (penalty none)");
}

// Candidate selection shared by both construction paths: higher utility
// wins; epsilon ties prefer more agents, then lexicographically smaller
// member lists.
struct BestTracker {
  std::vector<int> members;
  double utility = 0.0;
  bool has_value = false;
  bool tie_fired = false;

  void offer(std::vector<int> candidate, double u, double eps) {
    if (!has_value) {
      members = std::move(candidate);
      utility = u;
      has_value = true;
      return;
    }
    if (std::abs(u - utility) <= eps) {
      if (candidate != members) tie_fired = true;
      if (candidate.size() > members.size() ||
          (candidate.size() == members.size() && candidate < members)) {
        members = std::move(candidate);
        utility = u;
      }
    } else if (u > utility) {
      members = std::move(candidate);
      utility = u;
    }
  }
};

std::vector<int> full_pool(const Instance& instance) {
  std::vector<int> pool(static_cast<size_t>(instance.size()));
  std::iota(pool.begin(), pool.end(), 0);
  return pool;
}

}  // namespace

std::vector<int> max_utility_group(const Instance& instance, std::span<const int> pool,
                                   const UtilitySpec& spec, int exact_cap) {
  require_hedonic(spec, "max_utility_group");
  if (pool.empty()) throw std::invalid_argument("max_utility_group: empty pool");
  if (static_cast<int>(pool.size()) > exact_cap)
    throw std::invalid_argument(
        "max_utility_group: pool exceeds the exact enumeration cap (" +
        std::to_string(exact_cap) + "); use psae_diameter_fast");

  std::vector<int> ids(pool.begin(), pool.end());
  std::sort(ids.begin(), ids.end());
  const size_t p = ids.size();

  BestTracker best;
  for (uint64_t mask = 1; mask < (uint64_t{1} << p); ++mask) {
    std::vector<int> members;
    for (size_t i = 0; i < p; ++i)
      if (mask & (uint64_t{1} << i)) members.push_back(ids[i]);
    const double u = group_power(instance, members, spec);
    best.offer(std::move(members), u, spec.epsilon);
  }
  return best.members;
}

Partition psae_bruteforce(const Instance& instance, const UtilitySpec& spec,
                          int exact_cap) {
  require_hedonic(spec, "psae_bruteforce");
  std::vector<int> pool = full_pool(instance);
  if (static_cast<int>(pool.size()) > exact_cap)
    throw std::invalid_argument("psae_bruteforce: n exceeds the exact enumeration cap");

  std::vector<std::vector<int>> groups;
  while (!pool.empty()) {
    std::vector<int> g = max_utility_group(instance, pool, spec, exact_cap);
    std::erase_if(pool, [&](int id) { return std::find(g.begin(), g.end(), id) != g.end(); });
    groups.push_back(std::move(g));
  }
  return make_partition(instance, spec, std::move(groups));
}

PsaeFastResult psae_diameter_fast(const Instance& instance, const UtilitySpec& spec,
                                  bool oracle_check, int exact_cap) {
  require_hedonic(spec, "psae_diameter_fast");
  if (spec.coverage != CoverageKind::Diameter)
    throw std::invalid_argument("psae_diameter_fast: coverage must be Diameter");

  PsaeFastResult result;
  std::vector<int> pool = full_pool(instance);
  std::vector<std::vector<int>> groups;

  while (!pool.empty()) {
    PsaeDiagnostics::IterationStats stats;
    stats.pool_size = static_cast<int>(pool.size());

    BestTracker best;
    for (int id : pool) {
      best.offer({id}, group_power(instance, std::vector<int>{id}, spec), spec.epsilon);
      ++stats.candidates_evaluated;
    }

    for (size_t ii = 0; ii < pool.size(); ++ii) {
      for (size_t jj = ii + 1; jj < pool.size(); ++jj) {
        const int i = pool[ii];
        const int j = pool[jj];
        const Point& xi = instance.agent(i).location;
        const Point& xj = instance.agent(j).location;
        const double dij = distance(xi, xj);

        // Lens of the pair: pool members within d(i, j) of both ends.
        std::vector<int> lens;
        for (int k : pool)
          if (distance(instance.agent(k).location, xi) <= dij + spec.epsilon &&
              distance(instance.agent(k).location, xj) <= dij + spec.epsilon)
            lens.push_back(k);

        Point mid = xi;
        for (int c = 0; c < mid.dim(); ++c) mid[c] = 0.5 * (xi[c] + xj[c]);
        std::sort(lens.begin(), lens.end(), [&](int a, int b) {
          const double da = distance(instance.agent(a).location, mid);
          const double db = distance(instance.agent(b).location, mid);
          if (da != db) return da < db;
          return a < b;
        });

        // Greedy chain keeping the true diameter within d(i, j); the
        // pair's single candidate is the best-utility prefix.
        std::vector<int> chain;
        std::vector<int> best_prefix;
        double best_prefix_u = 0.0;
        for (int k : lens) {
          bool fits = true;
          for (int c : chain)
            if (distance(instance.agent(k).location, instance.agent(c).location) >
                dij + spec.epsilon) {
              fits = false;
              break;
            }
          if (!fits) continue;
          chain.push_back(k);
          const double u = group_power(instance, chain, spec);
          if (best_prefix.empty() || strictly_greater(u, best_prefix_u, spec.epsilon) ||
              (std::abs(u - best_prefix_u) <= spec.epsilon && chain.size() > best_prefix.size())) {
            best_prefix = chain;
            best_prefix_u = u;
          }
        }
        if (!best_prefix.empty()) {
          std::sort(best_prefix.begin(), best_prefix.end());
          best.offer(std::move(best_prefix), best_prefix_u, spec.epsilon);
        }
        ++stats.candidates_evaluated;
      }
    }

    stats.tie_break_fired = best.tie_fired;
    result.diagnostics.iterations.push_back(stats);

    std::erase_if(pool, [&](int id) {
      return std::find(best.members.begin(), best.members.end(), id) != best.members.end();
    });
    groups.push_back(std::move(best.members));
  }

  result.partition = make_partition(instance, spec, std::move(groups));

  if (oracle_check && instance.size() <= exact_cap) {
    const Partition brute = psae_bruteforce(instance, spec, exact_cap);
    result.diagnostics.oracle_checked = true;
    result.diagnostics.fast_first_group = result.partition.groups.front();
    result.diagnostics.brute_first_group = brute.groups.front();
    result.diagnostics.fast_first_utility = result.partition.utilities.front();
    result.diagnostics.brute_first_utility = brute.utilities.front();
    result.diagnostics.oracle_agrees =
        std::abs(result.diagnostics.fast_first_utility -
                 result.diagnostics.brute_first_utility) <= spec.epsilon;
  }
  return result;
}

}  // namespace gfg
