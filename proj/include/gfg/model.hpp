#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfg/geometry.hpp"

namespace gfg {

// Sentinel target index: deviating to a fresh (previously empty) group.
// The empty group's utility is -infinity conceptually; callers treat
// acceptance by it as vacuous instead of doing float arithmetic with it.
inline constexpr int kNewGroup = -1;

enum class EquilibriumKind { AE, SAE };

// Group power f(R, D): strictly increasing in total resources R and
// strictly decreasing in coverage D. Ratio forms are g(R) / (1 + D).
struct PowerForm {
  enum class Kind { RatioLinear, RatioPower, RatioLogScaled, AffineTradeoff };

  Kind kind = Kind::RatioLinear;
  double alpha = 1.0;  // RatioPower exponent (> 0)
  double a = 1.0;      // AffineTradeoff: f = a*R - b*D
  double b = 1.0;

  static PowerForm ratio_linear() { return {}; }
  static PowerForm ratio_power(double alpha);
  static PowerForm ratio_log_scaled() { return {Kind::RatioLogScaled}; }
  static PowerForm affine_tradeoff(double a, double b);

  bool is_ratio() const { return kind != Kind::AffineTradeoff; }
  double numerator(double total_resource) const;  // g(R), ratio kinds only
  double operator()(double total_resource, double coverage) const;
};

// Penalty H_G contributed by a group to every strictly weaker group.
struct PenaltyForm {
  enum class Kind { None, ResourceScaled, PowerScaled };

  Kind kind = Kind::None;
  double beta = 0.0;

  static PenaltyForm none() { return {}; }
  static PenaltyForm resource_scaled(double beta) { return {Kind::ResourceScaled, beta}; }
  static PenaltyForm power_scaled(double beta) { return {Kind::PowerScaled, beta}; }

  bool is_none() const { return kind == Kind::None; }
  double operator()(double total_resource, double power) const;
};

struct UtilitySpec {
  CoverageKind coverage = CoverageKind::Diameter;
  PowerForm power;
  PenaltyForm penalty;
  double epsilon = 1e-9;
};

// Spot-checks the monotonicity/sign requirements on a sample grid.
// Throws std::invalid_argument on violation.
void validate_utility_spec(const UtilitySpec& spec);

struct Agent {
  int id = 0;
  Point location;
  double resource = 1.0;
};

struct Instance {
  int dimension = 1;
  std::vector<Agent> agents;  // sorted by id; ids are 0..n-1

  int size() const { return static_cast<int>(agents.size()); }
  const Agent& agent(int id) const { return agents[static_cast<size_t>(id)]; }
  std::vector<Point> locations(std::span<const int> members) const;
};

// Validates and normalizes (sorts agents by id). Throws on bad data.
Instance make_instance(int dimension, std::vector<Agent> agents);

// Disjoint cover of the agents. Groups are kept in canonical order:
// non-increasing utility, ties broken lexicographically by the sorted
// member-id lists. The powers/utilities fields are derived caches.
struct Partition {
  std::vector<std::vector<int>> groups;
  std::vector<int> assignment;  // agent id -> group index
  std::vector<double> powers;
  std::vector<double> utilities;

  int group_count() const { return static_cast<int>(groups.size()); }
};

Partition make_partition(const Instance& instance, const UtilitySpec& spec,
                         std::vector<std::vector<int>> groups);

// Convenience initial states.
Partition singletons_partition(const Instance& instance, const UtilitySpec& spec);
Partition grand_coalition_partition(const Instance& instance, const UtilitySpec& spec);

double group_coverage(const Instance& instance, std::span<const int> members,
                      CoverageKind kind);
double group_power(const Instance& instance, std::span<const int> members,
                   const UtilitySpec& spec);
double group_resources(const Instance& instance, std::span<const int> members);

// Utility of groups[index] within the given grouping: power minus the
// penalties of strictly more powerful groups (strictness uses epsilon).
double group_utility(const Instance& instance,
                     const std::vector<std::vector<int>>& groups, int index,
                     const UtilitySpec& spec);

// Agent utilities sorted in non-increasing order.
struct PotentialVector {
  std::vector<double> values;
};

PotentialVector potential_vector(const Instance& instance, const Partition& partition,
                                 const UtilitySpec& spec);

enum class Ordering { Precedes, Equal, Succeeds };

// Lexicographic comparison of a relative to b with epsilon-equality on
// entries: Succeeds when a ranks strictly higher.
Ordering compare_states(const PotentialVector& a, const PotentialVector& b,
                        double epsilon);

// Feasibility of a preference profile: a_i must equal the set of agents
// that chose the same set. Witness names one violating pair (i, j).
struct ProfileCheck {
  bool feasible = false;
  std::optional<Partition> partition;
  std::pair<int, int> witness{-1, -1};
};

ProfileCheck validate_profile(const Instance& instance, const UtilitySpec& spec,
                              const std::vector<std::vector<int>>& preferences);

// Epsilon-semantics used for every strict/weak inequality of the
// equilibrium conditions: "x > y" means x > y + eps, "x >= y" means
// x > y - eps.
inline bool strictly_greater(double x, double y, double eps) { return x > y + eps; }
inline bool weakly_geq(double x, double y, double eps) { return x > y - eps; }

// One subset move: `movers` leave `from_group` and join `to_group`
// (kNewGroup for a fresh group).
struct Deviation {
  std::vector<int> movers;
  int from_group = -1;
  int to_group = kNewGroup;
  double utility_before = 0.0;
  double utility_after = 0.0;
};

struct DeviationEval {
  double before = 0.0;        // movers' current utility
  double after = 0.0;         // movers' utility after the move
  double target_before = 0.0; // target group's current utility (unless NewGroup)
  bool improving = false;     // after > before + eps
  bool accepted = false;      // after >= target_before - eps (vacuous for NewGroup)
};

// Evaluates the move of `movers` (all in one group) to `target`.
// Utilities after the move are computed in the post-deviation grouping;
// with PenaltyForm::None they coincide with group power.
DeviationEval evaluate_deviation(const Instance& instance, const Partition& partition,
                                 std::span<const int> movers, int target,
                                 const UtilitySpec& spec);

// Post-deviation group lists (non-canonical); movers_index receives the
// position of the movers' new group.
std::vector<std::vector<int>> apply_deviation(const Partition& partition,
                                              std::span<const int> movers, int target,
                                              int* movers_index = nullptr);

std::string to_string(const Partition& partition);

}  // namespace gfg
