#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gfg/model.hpp"

namespace gfg {

struct DagInput {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
};

// Validates node range, self-loops, and acyclicity.
DagInput make_dag(int node_count, std::vector<std::pair<int, int>> edges);

// Deterministic topological order (smallest node id first among ready nodes).
std::vector<int> topological_sort(const DagInput& dag);

// Layout failure that a smaller epsilon (or fresh offsets) may fix.
struct LayoutError : std::runtime_error {
  double suggested_epsilon;
  LayoutError(const std::string& what, double suggested)
      : std::runtime_error(what), suggested_epsilon(suggested) {}
};

// Geometric scaffold for one group: a thin sliver around a 2D segment.
struct LayoutGroup {
  Point seg_a, seg_b;               // segment endpoints
  std::vector<Point> scaffold;      // 2 agents near each endpoint
  std::vector<Point> crossings;     // one agent per out-edge of this node
  std::vector<Point> fillers;       // interior agents added for size padding

  std::vector<Point> all_points() const;
  int size() const;
};

struct Layout {
  int m = 0;
  double epsilon = 0.0;
  double segment_length = 0.0;
  std::vector<int> topo_order;                  // topo_order[k] = dag node at position k
  std::vector<std::pair<int, int>> edges_topo;  // edges in topo-position space, first < second
  std::vector<LayoutGroup> groups;              // indexed by topo position
};

// Same-length pairwise-intersecting segments with scaffold agents at the
// endpoints (congruent hulls) and a crossing agent per DAG edge, assigned
// to the topologically earlier group. Throws LayoutError when epsilon is
// too large to keep unintended agents out of foreign hulls.
Layout layout_segments(const DagInput& dag, double epsilon, uint64_t seed);

// Adds interior fillers so the group sizes strictly decrease along the
// topological order. Hulls are unchanged (verified by the caller via the
// coverage measure).
void pad_group_sizes(Layout& layout);

struct ResourceAssignment {
  std::vector<double> per_group;  // r_1 > r_2 > ... > r_m = 1, per agent of that group
  double delta = 0.0;             // min coverage increase from any later-group agent
  double common_coverage = 0.0;   // shared D of the congruent hulls
};

// Lemma-style resource choice: r_m = 1 and each earlier r_k found by a
// doubling search on the blocking inequality (closed form for the
// ratio-linear power). Requires HullPerimeter coverage and no penalty.
ResourceAssignment assign_resources(const Layout& layout, const UtilitySpec& spec);

struct GrowthEvidence {
  bool satisfied = false;
  double best_ratio = 0.0;  // max of f(R,D)/f(R+r,D+delta) over the grid
  double best_r_value = 0.0;
  bool subexp_applicable = false;  // ratio forms only
  bool subexp_ok = true;
};

// Grid check of the growth condition: the ratio f(R,D)/f(R+r,D+delta)
// must exceed 1 + margin somewhere on a geometric R-grid. Ratio power
// forms additionally get a numeric sub-exponential check on g.
GrowthEvidence check_growth_condition(const PowerForm& power, double r, double D,
                                      double delta);
GrowthEvidence check_growth_condition(const std::function<double(double, double)>& f,
                                      double r, double D, double delta);

struct RealizationChecks {
  bool ae_verified = false;
  bool graph_matches = false;
  bool sizes_strictly_decreasing = false;
  bool growth_condition_holds = false;

  bool all() const {
    return ae_verified && graph_matches && sizes_strictly_decreasing &&
           growth_condition_holds;
  }
};

struct RealizationCertificate {
  Instance instance;
  Partition partition;
  UtilitySpec spec;
  std::vector<double> group_resources;  // per agent of group k (positions, topo order)
  std::vector<int> group_sizes;
  std::vector<int> topo_order;          // position k -> dag node
  double delta = 0.0;
  double common_coverage = 0.0;
  double epsilon_used = 0.0;
  int attempts = 1;
  RealizationChecks checks;
};

// End-to-end construction: layout -> padding -> resources, then verified
// by the exhaustive AE check and edge-for-edge graph comparison. Retries
// with halved epsilon/fresh offsets (up to 10 attempts) before failing.
RealizationCertificate realize_dag(const DagInput& dag, const UtilitySpec& spec,
                                   uint64_t seed = 0);

struct LemmaInequalityRecord {
  int k = 0;        // defending group position (1-based)
  int k_prime = 0;  // 0 for the join-blocking inequality, else the joining group
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Direct numeric evaluation of both sufficient inequalities for every
// applicable (k, k') pair of a certificate.
std::vector<LemmaInequalityRecord> evaluate_lemma_inequalities(
    const RealizationCertificate& cert);

}  // namespace gfg
