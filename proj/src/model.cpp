#include "gfg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gfg {

PowerForm PowerForm::ratio_power(double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("ratio_power: alpha must be > 0");
  PowerForm f;
  f.kind = Kind::RatioPower;
  f.alpha = alpha;
  return f;
}

PowerForm PowerForm::affine_tradeoff(double a, double b) {
  if (a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("affine_tradeoff: a and b must be > 0");
  PowerForm f;
  f.kind = Kind::AffineTradeoff;
  f.a = a;
  f.b = b;
  return f;
}

double PowerForm::numerator(double r) const {
  switch (kind) {
    case Kind::RatioLinear: return r;
    case Kind::RatioPower: return std::pow(r, alpha);
    case Kind::RatioLogScaled: return r * (1.0 + std::log1p(r));
    case Kind::AffineTradeoff: break;
  }
  throw std::logic_error("numerator() requires a ratio power form");
}

double PowerForm::operator()(double total_resource, double coverage) const {
  if (kind == Kind::AffineTradeoff) return a * total_resource - b * coverage;
  return numerator(total_resource) / (1.0 + coverage);
}

double PenaltyForm::operator()(double total_resource, double power) const {
  switch (kind) {
    case Kind::None: return 0.0;
    case Kind::ResourceScaled: return beta * total_resource;
    case Kind::PowerScaled: return beta * std::max(power, 0.0);
  }
  return 0.0;
}

void validate_utility_spec(const UtilitySpec& spec) {
  if (!(spec.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (spec.penalty.beta < 0.0) throw std::invalid_argument("penalty beta must be >= 0");
  const double rs[] = {0.1, 1.0, 7.5, 120.0};
  const double ds[] = {0.0, 0.3, 2.0, 40.0};
  for (double r : rs) {
    for (double d : ds) {
      const double base = spec.power(r, d);
      if (!std::isfinite(base)) throw std::invalid_argument("power form is not finite");
      if (spec.power(r * 1.1, d) <= base)
        throw std::invalid_argument("power form is not strictly increasing in R");
      if (spec.power(r, d + 0.1) >= base)
        throw std::invalid_argument("power form is not strictly decreasing in D");
      if (spec.penalty(r, base) < 0.0)
        throw std::invalid_argument("penalty form is negative");
    }
  }
}

std::vector<Point> Instance::locations(std::span<const int> members) const {
  std::vector<Point> pts;
  pts.reserve(members.size());
  for (int id : members) pts.push_back(agent(id).location);
  return pts;
}

Instance make_instance(int dimension, std::vector<Agent> agents) {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (agents.size() < 2) throw std::invalid_argument("instance needs n >= 2 agents");
  std::sort(agents.begin(), agents.end(),
            [](const Agent& x, const Agent& y) { return x.id < y.id; });
  for (size_t i = 0; i < agents.size(); ++i) {
    const Agent& a = agents[i];
    if (a.id != static_cast<int>(i))
      throw std::invalid_argument("agent ids must be unique and cover 0..n-1");
    if (!(a.resource > 0.0) || !std::isfinite(a.resource))
      throw std::invalid_argument("agent " + std::to_string(a.id) +
                                  ": resource must be positive");
    if (a.location.dim() != dimension)
      throw std::invalid_argument("agent " + std::to_string(a.id) +
                                  ": location dimension mismatch");
    for (double c : a.location.coords)
      if (!std::isfinite(c))
        throw std::invalid_argument("agent " + std::to_string(a.id) +
                                    ": non-finite coordinate");
  }
  Instance inst;
  inst.dimension = dimension;
  inst.agents = std::move(agents);
  return inst;
}

double group_resources(const Instance& instance, std::span<const int> members) {
  double total = 0.0;
  for (int id : members) total += instance.agent(id).resource;
  return total;
}

double group_coverage(const Instance& instance, std::span<const int> members,
                      CoverageKind kind) {
  const auto pts = instance.locations(members);
  if (kind == CoverageKind::Diameter) return diameter(pts);
  return hull_measure(convex_hull(pts), kind);
}

double group_power(const Instance& instance, std::span<const int> members,
                   const UtilitySpec& spec) {
  if (members.empty()) throw std::invalid_argument("group_power: empty member set");
  return spec.power(group_resources(instance, members),
                    group_coverage(instance, members, spec.coverage));
}

namespace {

struct GroupRecord {
  std::vector<int> members;
  double resources = 0.0;
  double power = 0.0;
  double utility = 0.0;
};

std::vector<GroupRecord> build_records(const Instance& instance,
                                       const std::vector<std::vector<int>>& groups,
                                       const UtilitySpec& spec) {
  std::vector<GroupRecord> recs;
  recs.reserve(groups.size());
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("empty group in partition");
    GroupRecord r;
    r.members = g;
    std::sort(r.members.begin(), r.members.end());
    r.resources = group_resources(instance, r.members);
    r.power = group_power(instance, r.members, spec);
    recs.push_back(std::move(r));
  }
  for (auto& r : recs) {
    double penalty_sum = 0.0;
    for (const auto& other : recs) {
      if (&other == &r) continue;
      if (strictly_greater(other.power, r.power, spec.epsilon))
        penalty_sum += spec.penalty(other.resources, other.power);
    }
    r.utility = r.power - penalty_sum;
  }
  return recs;
}

}  // namespace

double group_utility(const Instance& instance,
                     const std::vector<std::vector<int>>& groups, int index,
                     const UtilitySpec& spec) {
  const auto recs = build_records(instance, groups, spec);
  return recs.at(static_cast<size_t>(index)).utility;
}

Partition make_partition(const Instance& instance, const UtilitySpec& spec,
                         std::vector<std::vector<int>> groups) {
  auto recs = build_records(instance, groups, spec);

  std::vector<char> seen(static_cast<size_t>(instance.size()), 0);
  for (const auto& r : recs) {
    for (int id : r.members) {
      if (id < 0 || id >= instance.size())
        throw std::invalid_argument("partition references unknown agent " +
                                    std::to_string(id));
      if (seen[static_cast<size_t>(id)])
        throw std::invalid_argument("agent " + std::to_string(id) +
                                    " appears in two groups");
      seen[static_cast<size_t>(id)] = 1;
    }
  }
  for (int id = 0; id < instance.size(); ++id)
    if (!seen[static_cast<size_t>(id)])
      throw std::invalid_argument("agent " + std::to_string(id) + " is unassigned");

  std::sort(recs.begin(), recs.end(), [](const GroupRecord& x, const GroupRecord& y) {
    if (x.utility != y.utility) return x.utility > y.utility;
    return x.members < y.members;
  });

  Partition p;
  p.assignment.assign(static_cast<size_t>(instance.size()), -1);
  for (size_t gi = 0; gi < recs.size(); ++gi) {
    for (int id : recs[gi].members) p.assignment[static_cast<size_t>(id)] = static_cast<int>(gi);
    p.groups.push_back(std::move(recs[gi].members));
    p.powers.push_back(recs[gi].power);
    p.utilities.push_back(recs[gi].utility);
  }
  return p;
}

Partition singletons_partition(const Instance& instance, const UtilitySpec& spec) {
  std::vector<std::vector<int>> groups;
  for (int id = 0; id < instance.size(); ++id) groups.push_back({id});
  return make_partition(instance, spec, std::move(groups));
}

Partition grand_coalition_partition(const Instance& instance, const UtilitySpec& spec) {
  std::vector<int> all(static_cast<size_t>(instance.size()));
  std::iota(all.begin(), all.end(), 0);
  return make_partition(instance, spec, {all});
}

PotentialVector potential_vector(const Instance& instance, const Partition& partition,
                                 const UtilitySpec& spec) {
  (void)spec;
  PotentialVector psi;
  psi.values.reserve(static_cast<size_t>(instance.size()));
  for (size_t gi = 0; gi < partition.groups.size(); ++gi)
    psi.values.insert(psi.values.end(), partition.groups[gi].size(),
                      partition.utilities[gi]);
  std::sort(psi.values.begin(), psi.values.end(), std::greater<>());
  return psi;
}

Ordering compare_states(const PotentialVector& a, const PotentialVector& b,
                        double epsilon) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("compare_states: length mismatch");
  for (size_t i = 0; i < a.values.size(); ++i) {
    if (std::abs(a.values[i] - b.values[i]) <= epsilon) continue;
    return a.values[i] > b.values[i] ? Ordering::Succeeds : Ordering::Precedes;
  }
  return Ordering::Equal;
}

ProfileCheck validate_profile(const Instance& instance, const UtilitySpec& spec,
                              const std::vector<std::vector<int>>& preferences) {
  const int n = instance.size();
  if (static_cast<int>(preferences.size()) != n)
    throw std::invalid_argument("validate_profile: need one preference set per agent");

  std::vector<std::set<int>> prefs;
  prefs.reserve(preferences.size());
  for (int i = 0; i < n; ++i) {
    std::set<int> s(preferences[static_cast<size_t>(i)].begin(),
                    preferences[static_cast<size_t>(i)].end());
    if (!s.count(i))
      throw std::invalid_argument("agent " + std::to_string(i) +
                                  " does not include itself in its chosen set");
    prefs.push_back(std::move(s));
  }

  ProfileCheck result;
  for (int i = 0; i < n; ++i) {
    for (int j : prefs[static_cast<size_t>(i)]) {
      if (j < 0 || j >= n)
        throw std::invalid_argument("preference references unknown agent " +
                                    std::to_string(j));
      if (prefs[static_cast<size_t>(j)] != prefs[static_cast<size_t>(i)]) {
        result.feasible = false;
        result.witness = {i, j};
        return result;
      }
    }
  }

  std::vector<std::vector<int>> groups;
  std::vector<char> placed(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (placed[static_cast<size_t>(i)]) continue;
    std::vector<int> g(prefs[static_cast<size_t>(i)].begin(),
                       prefs[static_cast<size_t>(i)].end());
    for (int id : g) placed[static_cast<size_t>(id)] = 1;
    groups.push_back(std::move(g));
  }
  result.feasible = true;
  result.partition = make_partition(instance, spec, std::move(groups));
  return result;
}

std::vector<std::vector<int>> apply_deviation(const Partition& partition,
                                              std::span<const int> movers, int target,
                                              int* movers_index) {
  const int from = partition.assignment[static_cast<size_t>(movers.front())];
  std::vector<std::vector<int>> out;
  out.reserve(partition.groups.size() + 1);
  int movers_at = -1;

  for (int gi = 0; gi < partition.group_count(); ++gi) {
    std::vector<int> members;
    if (gi == from) {
      for (int id : partition.groups[static_cast<size_t>(gi)])
        if (std::find(movers.begin(), movers.end(), id) == movers.end())
          members.push_back(id);
      if (members.empty()) continue;  // group dissolved
    } else {
      members = partition.groups[static_cast<size_t>(gi)];
    }
    if (gi == target) {
      members.insert(members.end(), movers.begin(), movers.end());
      std::sort(members.begin(), members.end());
      movers_at = static_cast<int>(out.size());
    }
    out.push_back(std::move(members));
  }
  if (target == kNewGroup) {
    std::vector<int> fresh(movers.begin(), movers.end());
    std::sort(fresh.begin(), fresh.end());
    movers_at = static_cast<int>(out.size());
    out.push_back(std::move(fresh));
  }
  if (movers_index) *movers_index = movers_at;
  return out;
}

DeviationEval evaluate_deviation(const Instance& instance, const Partition& partition,
                                 std::span<const int> movers, int target,
                                 const UtilitySpec& spec) {
  if (movers.empty()) throw std::invalid_argument("evaluate_deviation: empty mover set");
  const int from = partition.assignment[static_cast<size_t>(movers.front())];
  for (int id : movers)
    if (partition.assignment[static_cast<size_t>(id)] != from)
      throw std::invalid_argument("evaluate_deviation: movers span multiple groups");
  if (target == from) throw std::invalid_argument("evaluate_deviation: target is the current group");

  DeviationEval eval;
  eval.before = partition.utilities[static_cast<size_t>(from)];
  int movers_at = -1;
  const auto post = apply_deviation(partition, movers, target, &movers_at);
  eval.after = group_utility(instance, post, movers_at, spec);
  eval.improving = strictly_greater(eval.after, eval.before, spec.epsilon);
  if (target == kNewGroup) {
    eval.accepted = true;  // the empty group accepts vacuously
  } else {
    eval.target_before = partition.utilities[static_cast<size_t>(target)];
    eval.accepted = weakly_geq(eval.after, eval.target_before, spec.epsilon);
  }
  return eval;
}

std::string to_string(const Partition& partition) {
  std::ostringstream os;
  os << "{";
  for (size_t gi = 0; gi < partition.groups.size(); ++gi) {
    if (gi) os << " ";
    os << "{";
    for (size_t i = 0; i < partition.groups[gi].size(); ++i) {
      if (i) os << ",";
      os << partition.groups[gi][i];
    }
    os << "}";
  }
  os << "}";
  return os.str();
}

}  // namespace gfg
