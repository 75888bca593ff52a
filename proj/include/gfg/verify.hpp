#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "gfg/model.hpp"

namespace gfg {

struct AeVerdict {
  bool is_ae = false;
  std::optional<Deviation> witness;  // first blocking deviation in scan order
};

// Eqs. check for single-agent deviations: for every agent and every
// target (other groups and a fresh group), either the agent does not
// gain or the target would refuse.
AeVerdict check_ae(const Instance& instance, const Partition& partition,
                   const UtilitySpec& spec);

struct SaeVerdict {
  enum class Kind { IsSae, NotSae, SaeUpToSize };
  Kind kind = Kind::IsSae;
  int subset_cap = std::numeric_limits<int>::max();
  std::optional<Deviation> witness;

  bool ok() const { return kind != Kind::NotSae; }
};

// Same check over every nonempty subset of each group. When
// max_subset_size is below the largest group size and no violation is
// found, the verdict is the qualified SaeUpToSize.
SaeVerdict check_sae(const Instance& instance, const Partition& partition,
                     const UtilitySpec& spec,
                     int max_subset_size = std::numeric_limits<int>::max());

// Ground-truth oracle: every set partition of the agents that passes the
// requested check, in restricted-growth-string enumeration order.
// Requires n <= 10.
std::vector<Partition> enumerate_equilibria(const Instance& instance,
                                            const UtilitySpec& spec,
                                            EquilibriumKind kind);

}  // namespace gfg
