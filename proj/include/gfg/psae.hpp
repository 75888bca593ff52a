#pragma once

#include <vector>

#include "gfg/model.hpp"

namespace gfg {

// Greedy PSAE construction works with hedonic utilities (utility ==
// power); specs with a penalty term are rejected.

// Argmax-utility subset of `pool` by exhaustive enumeration. Epsilon-tied
// maxima prefer more agents, then the lexicographically smaller sorted
// member list. Throws when |pool| exceeds exact_cap.
std::vector<int> max_utility_group(const Instance& instance, std::span<const int> pool,
                                   const UtilitySpec& spec, int exact_cap = 20);

// Iteratively extracts the max-utility group until the pool is empty.
Partition psae_bruteforce(const Instance& instance, const UtilitySpec& spec,
                          int exact_cap = 20);

struct PsaeDiagnostics {
  struct IterationStats {
    int pool_size = 0;
    int candidates_evaluated = 0;  // bounded by pool + C(pool, 2)
    bool tie_break_fired = false;
  };
  std::vector<IterationStats> iterations;
  bool oracle_checked = false;
  bool oracle_agrees = true;
  double fast_first_utility = 0.0;
  double brute_first_utility = 0.0;
  std::vector<int> fast_first_group;
  std::vector<int> brute_first_group;
};

struct PsaeFastResult {
  Partition partition;
  PsaeDiagnostics diagnostics;
};

// O(n^3)-candidate construction for Diameter coverage: per iteration the
// candidates are all singletons plus, for each pair (i, j), the agents
// within d(i, j) of both endpoints, greedily filtered (by distance to the
// pair midpoint) to keep the set's true diameter within d(i, j) and
// post-selected to the best-utility prefix. With oracle_check set and the
// pool within exact_cap, the result is compared against psae_bruteforce.
PsaeFastResult psae_diameter_fast(const Instance& instance, const UtilitySpec& spec,
                                  bool oracle_check = false, int exact_cap = 20);

}  // namespace gfg
