#include "gfg/structure.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "gfg/verify.hpp"

namespace gfg {

namespace {

Hull group_hull(const Instance& instance, const Partition& partition, int gi) {
  return convex_hull(instance.locations(partition.groups[static_cast<size_t>(gi)]));
}

bool any_member_inside(const Instance& instance, const std::vector<int>& members,
                       const Hull& hull, double tol) {
  for (int id : members)
    if (hull_contains(hull, instance.agent(id).location, tol)) return true;
  return false;
}

bool all_members_inside(const Instance& instance, const std::vector<int>& members,
                        const Hull& hull, double tol) {
  for (int id : members)
    if (!hull_contains(hull, instance.agent(id).location, tol)) return false;
  return true;
}

}  // namespace

std::string to_string(PairRelation relation) {
  switch (relation) {
    case PairRelation::NonOverlapping: return "non-overlapping";
    case PairRelation::EncroachesOn: return "encroaches-on";
    case PairRelation::MutuallyEncroaching: return "mutually-encroaching";
    case PairRelation::Nested: return "nested";
    case PairRelation::OverlappingOnly: return "overlapping-only";
  }
  return "?";
}

std::vector<int> territory_members(const Instance& instance, const Partition& partition,
                                   int group_index, double tol) {
  const Hull hull = group_hull(instance, partition, group_index);
  std::vector<int> inside;
  for (int id = 0; id < instance.size(); ++id)
    if (hull_contains(hull, instance.agent(id).location, tol)) inside.push_back(id);
  return inside;
}

PairClassification classify_pair(const Instance& instance, const Partition& partition,
                                 int g, int h, double tol) {
  if (g == h) throw std::invalid_argument("classify_pair: identical groups");
  const Hull hull_g = group_hull(instance, partition, g);
  const Hull hull_h = group_hull(instance, partition, h);
  const auto& members_g = partition.groups[static_cast<size_t>(g)];
  const auto& members_h = partition.groups[static_cast<size_t>(h)];

  const bool g_in_h = any_member_inside(instance, members_g, hull_h, tol);
  const bool h_in_g = any_member_inside(instance, members_h, hull_g, tol);

  PairClassification c;
  if (g_in_h && h_in_g) {
    c.relation = PairRelation::MutuallyEncroaching;
    c.from = std::min(g, h);
    c.to = std::max(g, h);
    return c;
  }
  if (g_in_h || h_in_g) {
    const int enc = g_in_h ? g : h;
    const int other = g_in_h ? h : g;
    const auto& enc_members = g_in_h ? members_g : members_h;
    const Hull& other_hull = g_in_h ? hull_h : hull_g;
    c.relation = all_members_inside(instance, enc_members, other_hull, tol)
                     ? PairRelation::Nested
                     : PairRelation::EncroachesOn;
    c.from = enc;
    c.to = other;
    return c;
  }
  c.relation = hulls_intersect(hull_g, hull_h, tol) ? PairRelation::OverlappingOnly
                                                    : PairRelation::NonOverlapping;
  c.from = std::min(g, h);
  c.to = std::max(g, h);
  return c;
}

bool EncroachmentGraph::has_edge(int from, int to) const {
  return std::find(edges.begin(), edges.end(), std::make_pair(from, to)) != edges.end();
}

EncroachmentGraph encroachment_graph(const Instance& instance, const Partition& partition,
                                     double tol) {
  EncroachmentGraph graph;
  graph.group_count = partition.group_count();
  graph.members = partition.groups;

  std::vector<Hull> hulls;
  hulls.reserve(static_cast<size_t>(graph.group_count));
  for (int gi = 0; gi < graph.group_count; ++gi)
    hulls.push_back(group_hull(instance, partition, gi));

  for (int g = 0; g < graph.group_count; ++g) {
    for (int h = 0; h < graph.group_count; ++h) {
      if (g == h) continue;
      if (any_member_inside(instance, partition.groups[static_cast<size_t>(g)], hulls[static_cast<size_t>(h)], tol))
        graph.edges.emplace_back(g, h);
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());

  for (int g = 0; g < graph.group_count; ++g)
    for (int h = g + 1; h < graph.group_count; ++h)
      graph.labels.push_back(classify_pair(instance, partition, g, h, tol));
  return graph;
}

std::optional<std::vector<int>> topological_order(const EncroachmentGraph& graph) {
  const int m = graph.group_count;
  std::vector<int> indegree(static_cast<size_t>(m), 0);
  for (const auto& e : graph.edges) ++indegree[static_cast<size_t>(e.second)];

  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < m; ++v)
    if (indegree[static_cast<size_t>(v)] == 0) ready.push(v);

  std::vector<int> order;
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (const auto& e : graph.edges)
      if (e.first == v && --indegree[static_cast<size_t>(e.second)] == 0) ready.push(e.second);
  }
  if (static_cast<int>(order.size()) != m) return std::nullopt;
  return order;
}

namespace {

// A directed cycle among the nodes left over by Kahn's algorithm.
std::vector<int> find_cycle(const EncroachmentGraph& graph) {
  const int m = graph.group_count;
  std::vector<int> indegree(static_cast<size_t>(m), 0);
  for (const auto& e : graph.edges) ++indegree[static_cast<size_t>(e.second)];
  std::queue<int> ready;
  for (int v = 0; v < m; ++v)
    if (indegree[static_cast<size_t>(v)] == 0) ready.push(v);
  std::vector<char> removed(static_cast<size_t>(m), 0);
  while (!ready.empty()) {
    const int v = ready.front();
    ready.pop();
    removed[static_cast<size_t>(v)] = 1;
    for (const auto& e : graph.edges)
      if (e.first == v && --indegree[static_cast<size_t>(e.second)] == 0) ready.push(e.second);
  }

  int start = -1;
  for (int v = 0; v < m; ++v)
    if (!removed[static_cast<size_t>(v)]) {
      start = v;
      break;
    }
  if (start < 0) return {};

  // Every residual node keeps a residual predecessor, so walking
  // backwards must revisit a node; that closes a cycle.
  std::vector<int> path{start};
  std::vector<int> seen_at(static_cast<size_t>(m), -1);
  seen_at[static_cast<size_t>(start)] = 0;
  int cur = start;
  while (true) {
    int prev = -1;
    for (const auto& e : graph.edges)
      if (e.second == cur && !removed[static_cast<size_t>(e.first)]) {
        prev = e.first;
        break;
      }
    if (seen_at[static_cast<size_t>(prev)] >= 0) {
      path.erase(path.begin(), path.begin() + seen_at[static_cast<size_t>(prev)]);
      path.push_back(prev);
      std::reverse(path.begin(), path.end());
      return path;
    }
    seen_at[static_cast<size_t>(prev)] = static_cast<int>(path.size());
    path.push_back(prev);
    cur = prev;
  }
}

}  // namespace

StructureReport assert_structure_theorems(const Instance& instance,
                                          const Partition& partition,
                                          const UtilitySpec& spec, double tol) {
  if (!spec.penalty.is_none())
    throw std::invalid_argument(
        "assert_structure_theorems: requires a hedonic spec (penalty none)");
  if (!check_ae(instance, partition, spec).is_ae)
    throw std::invalid_argument("assert_structure_theorems: partition is not an AE");

  const EncroachmentGraph graph = encroachment_graph(instance, partition, tol);

  StructureReport report;
  for (const auto& label : graph.labels) {
    if (label.relation == PairRelation::MutuallyEncroaching) {
      report.no_mutual_encroachment = false;
      report.mutual_pairs.emplace_back(label.from, label.to);
    }
  }

  if (!topological_order(graph)) {
    report.acyclic = false;
    report.cycle = find_cycle(graph);
  }

  for (const auto& e : graph.edges) {
    const double u_from = partition.utilities[static_cast<size_t>(e.first)];
    const double u_to = partition.utilities[static_cast<size_t>(e.second)];
    if (!weakly_geq(u_from, u_to, spec.epsilon)) {
      report.edge_utilities_ok = false;
      report.violating_edges.push_back(e);
    } else if (std::abs(u_from - u_to) <= spec.epsilon) {
      report.near_tie_edges.push_back(e);
    }
  }
  return report;
}

}  // namespace gfg
