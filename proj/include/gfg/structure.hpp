#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gfg/model.hpp"

namespace gfg {

// Relation between two groups' territories. The first four labels follow
// the paper's taxonomy; OverlappingOnly covers hulls that intersect while
// neither group has a member inside the other's territory (possible in
// d >= 2, e.g. two crossing slivers with no agent at the crossing).
enum class PairRelation {
  NonOverlapping,
  EncroachesOn,        // directed: `from` has a member in `to`'s territory
  MutuallyEncroaching,
  Nested,              // directed: `from` lies entirely inside `to`'s territory
  OverlappingOnly,
};

std::string to_string(PairRelation relation);

struct PairClassification {
  PairRelation relation = PairRelation::NonOverlapping;
  int from = -1;  // meaningful for EncroachesOn (encroacher) and Nested (inner)
  int to = -1;
};

// Agents (members or not) located inside the closed hull of the group.
std::vector<int> territory_members(const Instance& instance, const Partition& partition,
                                   int group_index, double tol = kDefaultTol);

// Label precedence when several definitions apply: MutuallyEncroaching
// over Nested over plain EncroachesOn.
PairClassification classify_pair(const Instance& instance, const Partition& partition,
                                 int g, int h, double tol = kDefaultTol);

struct EncroachmentGraph {
  int group_count = 0;
  std::vector<std::vector<int>> members;
  std::vector<std::pair<int, int>> edges;        // (from, to), sorted
  std::vector<PairClassification> labels;        // one per unordered pair, (g, h) g < h

  bool has_edge(int from, int to) const;
};

EncroachmentGraph encroachment_graph(const Instance& instance, const Partition& partition,
                                     double tol = kDefaultTol);

// Topological order of the graph's nodes, or nullopt when cyclic.
std::optional<std::vector<int>> topological_order(const EncroachmentGraph& graph);

struct StructureReport {
  bool no_mutual_encroachment = true;
  std::vector<std::pair<int, int>> mutual_pairs;
  bool acyclic = true;
  std::vector<int> cycle;  // witness node sequence when cyclic
  bool edge_utilities_ok = true;                   // U_from > U_to - eps per edge
  std::vector<std::pair<int, int>> violating_edges;
  std::vector<std::pair<int, int>> near_tie_edges; // |U_from - U_to| <= eps

  bool passed() const { return no_mutual_encroachment && acyclic && edge_utilities_ok; }
};

// Checks the structural theorems on an AE of a hedonic spec: no mutual
// encroachment, acyclic encroachment graph, and every edge pointing from
// (weakly) higher to lower utility. Throws when the preconditions (AE,
// penalty none) fail.
StructureReport assert_structure_theorems(const Instance& instance,
                                          const Partition& partition,
                                          const UtilitySpec& spec,
                                          double tol = kDefaultTol);

}  // namespace gfg
