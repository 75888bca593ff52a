#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "gfg/model.hpp"

namespace gfg {

enum class DeviationPolicy { FirstFound, BestPotential, SeededRandom };

struct DynamicsStep {
  Deviation deviation;
  PotentialVector psi_after;
};

struct DynamicsResult {
  Partition final_partition;
  std::vector<DynamicsStep> steps;
  bool converged = false;
  int iterations = 0;
  int max_subset_size = std::numeric_limits<int>::max();
};

// Targets (existing group indices and/or kNewGroup) that strictly improve
// the movers' utility and would accept them. Empty when the movers do not
// share a group.
std::vector<int> improving_responses(const Instance& instance, const Partition& partition,
                                     std::span<const int> movers, const UtilitySpec& spec);

// Asynchronous improvement dynamics. AE mode moves single agents; SAE
// mode moves subsets of one group (up to max_subset_size members).
// Every executed step must strictly raise the potential vector; a step
// that fails to is an internal error and throws.
DynamicsResult run_dynamics(const Instance& instance, const Partition& initial,
                            const UtilitySpec& spec, EquilibriumKind mode,
                            DeviationPolicy policy = DeviationPolicy::FirstFound,
                            uint64_t seed = 0,
                            int max_subset_size = std::numeric_limits<int>::max(),
                            int max_iterations = 100000);

}  // namespace gfg
