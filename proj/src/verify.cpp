#include "gfg/verify.hpp"

#include <algorithm>
#include <stdexcept>

namespace gfg {

namespace {

// Shared witness scan. Returns the first improving-and-accepted move of a
// subset (size <= max_subset_size) in canonical scan order, or nullopt.
std::optional<Deviation> find_blocking_deviation(const Instance& instance,
                                                 const Partition& partition,
                                                 const UtilitySpec& spec,
                                                 int max_subset_size) {
  const int m = partition.group_count();
  for (int gi = 0; gi < m; ++gi) {
    const auto& members = partition.groups[static_cast<size_t>(gi)];
    const int n = static_cast<int>(members.size());
    const int cap = std::min(max_subset_size, n);
    for (int k = 1; k <= cap; ++k) {
      std::vector<int> idx(static_cast<size_t>(k));
      for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
      while (true) {
        std::vector<int> subset(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i)
          subset[static_cast<size_t>(i)] = members[static_cast<size_t>(idx[static_cast<size_t>(i)])];
        const bool whole_group = k == n;
        for (int target = 0; target <= m; ++target) {
          const int t = target == m ? kNewGroup : target;
          if (t == gi) continue;
          if (t == kNewGroup && whole_group) continue;
          const DeviationEval eval = evaluate_deviation(instance, partition, subset, t, spec);
          if (eval.improving && eval.accepted) {
            Deviation dev;
            dev.movers = subset;
            dev.from_group = gi;
            dev.to_group = t;
            dev.utility_before = eval.before;
            dev.utility_after = eval.after;
            return dev;
          }
        }
        int i = k - 1;
        while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

AeVerdict check_ae(const Instance& instance, const Partition& partition,
                   const UtilitySpec& spec) {
  AeVerdict verdict;
  verdict.witness = find_blocking_deviation(instance, partition, spec, 1);
  verdict.is_ae = !verdict.witness.has_value();
  return verdict;
}

SaeVerdict check_sae(const Instance& instance, const Partition& partition,
                     const UtilitySpec& spec, int max_subset_size) {
  SaeVerdict verdict;
  verdict.subset_cap = max_subset_size;
  verdict.witness = find_blocking_deviation(instance, partition, spec, max_subset_size);
  if (verdict.witness) {
    verdict.kind = SaeVerdict::Kind::NotSae;
    return verdict;
  }
  int largest = 0;
  for (const auto& g : partition.groups) largest = std::max<int>(largest, static_cast<int>(g.size()));
  verdict.kind = max_subset_size >= largest ? SaeVerdict::Kind::IsSae
                                            : SaeVerdict::Kind::SaeUpToSize;
  return verdict;
}

std::vector<Partition> enumerate_equilibria(const Instance& instance,
                                            const UtilitySpec& spec,
                                            EquilibriumKind kind) {
  const int n = instance.size();
  if (n > 10)
    throw std::invalid_argument("enumerate_equilibria: n <= 10 required (got " +
                                std::to_string(n) + ")");

  std::vector<Partition> out;
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> rgs(static_cast<size_t>(n), 0);
  while (true) {
    const int blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
    std::vector<std::vector<int>> groups(static_cast<size_t>(blocks));
    for (int i = 0; i < n; ++i) groups[static_cast<size_t>(rgs[static_cast<size_t>(i)])].push_back(i);
    Partition p = make_partition(instance, spec, std::move(groups));
    const bool pass = kind == EquilibriumKind::AE
                          ? check_ae(instance, p, spec).is_ae
                          : check_sae(instance, p, spec).kind == SaeVerdict::Kind::IsSae;
    if (pass) out.push_back(std::move(p));

    // Next RGS.
    int i = n - 1;
    while (i > 0) {
      int prefix_max = 0;
      for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs[static_cast<size_t>(j)]);
      if (rgs[static_cast<size_t>(i)] <= prefix_max) break;
      --i;
    }
    if (i == 0) break;
    ++rgs[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j) rgs[static_cast<size_t>(j)] = 0;
  }
  return out;
}

}  // namespace gfg
