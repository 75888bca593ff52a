#include "gfg/dynamics.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace gfg {

namespace {

struct CandidateMove {
  std::vector<int> movers;
  int from = -1;
  int target = kNewGroup;
  double before = 0.0;
  double after = 0.0;
};

// Visits size-k combinations of `members` in lexicographic order.
template <typename Fn>
bool for_each_combination(const std::vector<int>& members, int k, Fn&& fn) {
  const int n = static_cast<int>(members.size());
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  std::vector<int> subset(static_cast<size_t>(k));
  while (true) {
    for (int i = 0; i < k; ++i) subset[static_cast<size_t>(i)] = members[static_cast<size_t>(idx[static_cast<size_t>(i)])];
    if (!fn(subset)) return false;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
}

// Scan order: groups by index, subsets by size then lexicographic,
// targets by group index then NewGroup. Stops at the first improving
// move when first_only is set.
std::vector<CandidateMove> collect_moves(const Instance& instance, const Partition& partition,
                                         const UtilitySpec& spec, EquilibriumKind mode,
                                         int max_subset_size, bool first_only) {
  std::vector<CandidateMove> found;
  const int m = partition.group_count();
  for (int gi = 0; gi < m; ++gi) {
    const auto& members = partition.groups[static_cast<size_t>(gi)];
    const int max_size = mode == EquilibriumKind::AE
                             ? 1
                             : std::min<int>(max_subset_size, static_cast<int>(members.size()));
    for (int k = 1; k <= max_size; ++k) {
      const bool keep_going = for_each_combination(members, k, [&](const std::vector<int>& s) {
        const bool whole_group = s.size() == members.size();
        for (int target = 0; target <= m; ++target) {
          const int t = target == m ? kNewGroup : target;
          if (t == gi) continue;
          if (t == kNewGroup && whole_group) continue;  // re-creates the same group
          const DeviationEval eval = evaluate_deviation(instance, partition, s, t, spec);
          if (eval.improving && eval.accepted) {
            found.push_back({s, gi, t, eval.before, eval.after});
            if (first_only) return false;
          }
        }
        return true;
      });
      if (!keep_going) return found;
    }
  }
  return found;
}

}  // namespace

std::vector<int> improving_responses(const Instance& instance, const Partition& partition,
                                     std::span<const int> movers, const UtilitySpec& spec) {
  std::vector<int> targets;
  if (movers.empty()) return targets;
  const int from = partition.assignment[static_cast<size_t>(movers.front())];
  for (int id : movers)
    if (partition.assignment[static_cast<size_t>(id)] != from) return targets;

  const bool whole_group =
      movers.size() == partition.groups[static_cast<size_t>(from)].size();
  for (int t = 0; t < partition.group_count(); ++t) {
    if (t == from) continue;
    const DeviationEval eval = evaluate_deviation(instance, partition, movers, t, spec);
    if (eval.improving && eval.accepted) targets.push_back(t);
  }
  if (!whole_group) {
    const DeviationEval eval =
        evaluate_deviation(instance, partition, movers, kNewGroup, spec);
    if (eval.improving) targets.push_back(kNewGroup);
  }
  return targets;
}

DynamicsResult run_dynamics(const Instance& instance, const Partition& initial,
                            const UtilitySpec& spec, EquilibriumKind mode,
                            DeviationPolicy policy, uint64_t seed, int max_subset_size,
                            int max_iterations) {
  if (max_subset_size < 1) throw std::invalid_argument("max_subset_size must be >= 1");

  DynamicsResult result;
  result.max_subset_size = max_subset_size;
  result.final_partition = initial;
  std::mt19937_64 rng(seed);
  PotentialVector psi = potential_vector(instance, result.final_partition, spec);

  for (int iter = 0; iter < max_iterations; ++iter) {
    const bool first_only = policy == DeviationPolicy::FirstFound;
    auto moves = collect_moves(instance, result.final_partition, spec, mode,
                               max_subset_size, first_only);
    if (moves.empty()) {
      result.converged = true;
      result.iterations = iter;
      return result;
    }

    size_t chosen = 0;
    if (policy == DeviationPolicy::SeededRandom) {
      chosen = std::uniform_int_distribution<size_t>(0, moves.size() - 1)(rng);
    } else if (policy == DeviationPolicy::BestPotential) {
      PotentialVector best_psi;
      for (size_t i = 0; i < moves.size(); ++i) {
        Partition next = make_partition(
            instance, spec,
            apply_deviation(result.final_partition, moves[i].movers, moves[i].target));
        PotentialVector next_psi = potential_vector(instance, next, spec);
        if (i == 0 || compare_states(next_psi, best_psi, spec.epsilon) == Ordering::Succeeds) {
          best_psi = std::move(next_psi);
          chosen = i;
        }
      }
    }

    const CandidateMove& move = moves[chosen];
    Partition next = make_partition(
        instance, spec, apply_deviation(result.final_partition, move.movers, move.target));
    PotentialVector next_psi = potential_vector(instance, next, spec);
    if (compare_states(next_psi, psi, spec.epsilon) != Ordering::Succeeds)
      throw std::logic_error("dynamics step did not raise the potential vector");

    Deviation dev;
    dev.movers = move.movers;
    dev.from_group = move.from;
    dev.to_group = move.target;
    dev.utility_before = move.before;
    dev.utility_after = move.after;
    result.steps.push_back({std::move(dev), next_psi});
    result.final_partition = std::move(next);
    psi = std::move(next_psi);
  }

  result.converged = false;
  result.iterations = max_iterations;
  return result;
}

}  // namespace gfg
