#include "gfg/realize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "gfg/structure.hpp"
#include "gfg/verify.hpp"

namespace gfg {

namespace {

constexpr double kSegmentLength = 0.5;
constexpr double kInitialEpsilonFactor = 1e-3;  // of the segment length
constexpr int kMaxAttempts = 10;
constexpr double kResourceMargin = 1.05;

}  // namespace

DagInput make_dag(int node_count, std::vector<std::pair<int, int>> edges) {
  if (node_count < 1) throw std::invalid_argument("dag needs at least one node");
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= node_count || b < 0 || b >= node_count)
      throw std::invalid_argument("dag edge references unknown node");
    if (a == b) throw std::invalid_argument("dag contains a self-loop");
  }
  DagInput dag{node_count, std::move(edges)};
  topological_sort(dag);  // throws on cycles
  return dag;
}

std::vector<int> topological_sort(const DagInput& dag) {
  std::vector<int> indegree(static_cast<size_t>(dag.node_count), 0);
  for (const auto& e : dag.edges) ++indegree[static_cast<size_t>(e.second)];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < dag.node_count; ++v)
    if (indegree[static_cast<size_t>(v)] == 0) ready.push(v);
  std::vector<int> order;
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (const auto& e : dag.edges)
      if (e.first == v && --indegree[static_cast<size_t>(e.second)] == 0)
        ready.push(e.second);
  }
  if (static_cast<int>(order.size()) != dag.node_count)
    throw std::invalid_argument("input graph is not acyclic");
  return order;
}

std::vector<Point> LayoutGroup::all_points() const {
  std::vector<Point> pts = scaffold;
  pts.insert(pts.end(), crossings.begin(), crossings.end());
  pts.insert(pts.end(), fillers.begin(), fillers.end());
  return pts;
}

int LayoutGroup::size() const {
  return static_cast<int>(scaffold.size() + crossings.size() + fillers.size());
}

namespace {

Point lerp(const Point& a, const Point& b, double t) {
  Point p = a;
  for (int i = 0; i < p.dim(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
  return p;
}

// Validates that exactly the intended encroachments hold: each crossing
// agent of a topo edge (p, q) sits inside group q's hull, and every other
// foreign point keeps a clear margin outside it.
void validate_layout(const Layout& layout) {
  const int m = layout.m;
  std::vector<Hull> hulls;
  hulls.reserve(static_cast<size_t>(m));
  for (const auto& g : layout.groups) hulls.push_back(convex_hull(g.all_points()));

  std::set<std::pair<int, int>> edge_set(layout.edges_topo.begin(),
                                         layout.edges_topo.end());
  for (int p = 0; p < m; ++p) {
    // Which crossing agent realizes which out-edge: crossings are stored
    // in the order the edges were laid out.
    std::vector<int> out_targets;
    for (const auto& e : layout.edges_topo)
      if (e.first == p) out_targets.push_back(e.second);

    const auto& grp = layout.groups[static_cast<size_t>(p)];
    for (int q = 0; q < m; ++q) {
      if (q == p) continue;
      auto check_point = [&](const Point& x, bool intended_inside) {
        if (intended_inside) {
          if (!hull_contains(hulls[static_cast<size_t>(q)], x, kDefaultTol))
            throw LayoutError("crossing agent fell outside its target hull",
                              layout.epsilon / 2);
        } else if (hull_distance(hulls[static_cast<size_t>(q)], x) <= 0.5 * layout.epsilon) {
          throw LayoutError(
              "epsilon too large to keep scaffolds disjoint from foreign hulls; "
              "retry with epsilon <= " +
                  std::to_string(layout.epsilon / 2),
              layout.epsilon / 2);
        }
      };
      for (const auto& x : grp.scaffold) check_point(x, false);
      for (const auto& x : grp.fillers) check_point(x, false);
      for (size_t ci = 0; ci < grp.crossings.size(); ++ci)
        check_point(grp.crossings[ci], out_targets[ci] == q);
    }
  }
}

}  // namespace

Layout layout_segments(const DagInput& dag, double epsilon, uint64_t seed) {
  const int m = dag.node_count;
  const double len = kSegmentLength;
  if (!(epsilon > 0.0) || epsilon > 0.02 * len)
    throw std::invalid_argument("layout epsilon must be in (0, 0.02 * segment length]");

  Layout layout;
  layout.m = m;
  layout.epsilon = epsilon;
  layout.segment_length = len;
  layout.topo_order = topological_sort(dag);

  std::vector<int> pos_of_node(static_cast<size_t>(m), -1);
  for (int k = 0; k < m; ++k)
    pos_of_node[static_cast<size_t>(layout.topo_order[static_cast<size_t>(k)])] = k;
  for (const auto& e : dag.edges) {
    const int pa = pos_of_node[static_cast<size_t>(e.first)];
    const int pb = pos_of_node[static_cast<size_t>(e.second)];
    layout.edges_topo.emplace_back(pa, pb);
  }
  std::sort(layout.edges_topo.begin(), layout.edges_topo.end());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double pi = std::numbers::pi;
  const double offset_max = m > 1 ? 0.05 * len * std::sin(pi / m) : 0.0;

  std::vector<Point> centers, dirs, normals;
  for (int k = 0; k < m; ++k) {
    const double theta = pi * k / m;
    const Point u{std::cos(theta), std::sin(theta)};
    const Point nrm{-std::sin(theta), std::cos(theta)};
    const double off = offset_max * unif(rng);
    centers.push_back({off * nrm[0], off * nrm[1]});
    dirs.push_back(u);
    normals.push_back(nrm);
  }

  layout.groups.resize(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    auto& g = layout.groups[static_cast<size_t>(k)];
    const auto& c = centers[static_cast<size_t>(k)];
    const auto& u = dirs[static_cast<size_t>(k)];
    const auto& nrm = normals[static_cast<size_t>(k)];
    g.seg_a = {c[0] - 0.5 * len * u[0], c[1] - 0.5 * len * u[1]};
    g.seg_b = {c[0] + 0.5 * len * u[0], c[1] + 0.5 * len * u[1]};
    for (const Point* end : {&g.seg_a, &g.seg_b}) {
      g.scaffold.push_back({(*end)[0] + epsilon * nrm[0], (*end)[1] + epsilon * nrm[1]});
      g.scaffold.push_back({(*end)[0] - epsilon * nrm[0], (*end)[1] - epsilon * nrm[1]});
    }
  }

  // One agent per DAG edge at the segments' crossing, assigned to the
  // topologically earlier group.
  std::vector<Point> crossing_points;
  for (const auto& [p, q] : layout.edges_topo) {
    const auto& cp = centers[static_cast<size_t>(p)];
    const auto& cq = centers[static_cast<size_t>(q)];
    const auto& up = dirs[static_cast<size_t>(p)];
    const auto& uq = dirs[static_cast<size_t>(q)];
    const double det = up[0] * (-uq[1]) - (-uq[0]) * up[1];
    const double bx = cq[0] - cp[0];
    const double by = cq[1] - cp[1];
    const double t = (bx * (-uq[1]) - (-uq[0]) * by) / det;
    const double s = (up[0] * by - up[1] * bx) / det;
    if (std::abs(t) > 0.4 * len || std::abs(s) > 0.4 * len)
      throw LayoutError("segment crossing too close to an endpoint", epsilon);
    const Point x{cp[0] + t * up[0], cp[1] + t * up[1]};
    for (const auto& prev : crossing_points)
      if (distance(prev, x) < 1e-9 * len)
        throw LayoutError("coincident segment crossings", epsilon);
    crossing_points.push_back(x);
    layout.groups[static_cast<size_t>(p)].crossings.push_back(x);
  }

  validate_layout(layout);
  return layout;
}

void pad_group_sizes(Layout& layout) {
  const int m = layout.m;
  std::vector<int> target(static_cast<size_t>(m));
  target[static_cast<size_t>(m - 1)] = layout.groups[static_cast<size_t>(m - 1)].size();
  for (int k = m - 2; k >= 0; --k)
    target[static_cast<size_t>(k)] =
        std::max(layout.groups[static_cast<size_t>(k)].size(), target[static_cast<size_t>(k + 1)] + 1);

  for (int k = 0; k < m; ++k) {
    auto& g = layout.groups[static_cast<size_t>(k)];
    const Hull before = convex_hull(g.all_points());
    const double measure_before = hull_measure(before, CoverageKind::HullPerimeter);
    const int need = target[static_cast<size_t>(k)] - g.size();
    // Fillers sit on the centerline near endpoint A, clear of the central
    // crossing zone (crossings stay within 20% of the center) and strictly
    // inside the sliver.
    for (int i = 1; i <= need; ++i) {
      const double beta = 0.06 + 0.16 * static_cast<double>(i) / (need + 1);
      g.fillers.push_back(lerp(layout.groups[static_cast<size_t>(k)].seg_a,
                               layout.groups[static_cast<size_t>(k)].seg_b, beta));
    }
    const double measure_after =
        hull_measure(convex_hull(g.all_points()), CoverageKind::HullPerimeter);
    if (std::abs(measure_after - measure_before) > 1e-9)
      throw LayoutError("padding changed a group hull", layout.epsilon / 2);
  }
  validate_layout(layout);
}

GrowthEvidence check_growth_condition(const std::function<double(double, double)>& f,
                                      double r, double D, double delta) {
  if (!(r > 0.0) || !(delta > 0.0) || D < 0.0)
    throw std::invalid_argument("check_growth_condition: need r, delta > 0 and D >= 0");
  GrowthEvidence ev;
  for (int i = 0; i <= 44; ++i) {
    const double R = std::pow(10.0, 1.0 + 0.25 * i);
    const double num = f(R, D);
    const double den = f(R + r, D + delta);
    if (!std::isfinite(num) || !std::isfinite(den) || num <= 0.0 || den <= 0.0) continue;
    const double ratio = num / den;
    if (ratio > ev.best_ratio) {
      ev.best_ratio = ratio;
      ev.best_r_value = R;
    }
  }
  ev.satisfied = ev.best_ratio > 1.0 + 1e-9;
  return ev;
}

GrowthEvidence check_growth_condition(const PowerForm& power, double r, double D,
                                      double delta) {
  GrowthEvidence ev = check_growth_condition(
      [&power](double R, double d) { return power(R, d); }, r, D, delta);
  if (power.is_ratio()) {
    ev.subexp_applicable = true;
    const double R_tail = 1e12;
    ev.subexp_ok = std::log(power.numerator(R_tail)) / R_tail < 1e-6;
    ev.satisfied = ev.satisfied && ev.subexp_ok;
  }
  return ev;
}

ResourceAssignment assign_resources(const Layout& layout, const UtilitySpec& spec) {
  if (spec.coverage != CoverageKind::HullPerimeter)
    throw std::invalid_argument("assign_resources: coverage must be HullPerimeter");
  if (!spec.penalty.is_none())
    throw std::invalid_argument("assign_resources: requires a hedonic spec");

  const int m = layout.m;
  std::vector<std::vector<Point>> pts;
  std::vector<double> coverages;
  for (const auto& g : layout.groups) {
    pts.push_back(g.all_points());
    coverages.push_back(hull_measure(convex_hull(pts.back()), CoverageKind::HullPerimeter));
  }
  const double d_g = coverages.front();
  for (double c : coverages)
    if (std::abs(c - d_g) > 1e-9 * std::max(1.0, d_g))
      throw std::runtime_error("group hulls are not congruent");

  ResourceAssignment out;
  out.common_coverage = d_g;
  out.per_group.assign(static_cast<size_t>(m), 1.0);
  if (m == 1) return out;

  // Smallest coverage increase any later-group agent causes by joining an
  // earlier group.
  double delta = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    for (int kp = k + 1; kp < m; ++kp) {
      for (const auto& x : pts[static_cast<size_t>(kp)]) {
        std::vector<Point> extended = pts[static_cast<size_t>(k)];
        extended.push_back(x);
        const double grown =
            hull_measure(convex_hull(extended), CoverageKind::HullPerimeter);
        delta = std::min(delta, grown - coverages[static_cast<size_t>(k)]);
      }
    }
  }
  if (!(delta > 1e-12))
    throw std::runtime_error(
        "construction violated the strict-coverage-increase premise (delta <= 0)");
  out.delta = delta;

  const auto& f = spec.power;
  for (int k = m - 2; k >= 0; --k) {
    const double r_next = out.per_group[static_cast<size_t>(k + 1)];
    const double n_k = layout.groups[static_cast<size_t>(k)].size();
    auto blocks_join = [&](double r) {
      const double current = f(r * n_k, d_g);
      const double joined = f(r * n_k + r_next, d_g + delta);
      return joined < current - 1e-9 * std::max(1.0, std::abs(current));
    };

    double r = r_next * kResourceMargin;
    if (f.kind == PowerForm::Kind::RatioLinear) {
      // Cross-multiplied closed form: r > r_next * (1 + D) / (delta * n).
      r = std::max(r, kResourceMargin * r_next * (1.0 + d_g) / (delta * n_k));
    }
    while (!blocks_join(r)) {
      r *= 2.0;
      if (!(r < 1e250))
        throw std::runtime_error("growth condition violated in practice");
    }
    out.per_group[static_cast<size_t>(k)] = r;
  }
  return out;
}

RealizationCertificate realize_dag(const DagInput& dag, const UtilitySpec& spec,
                                   uint64_t seed) {
  validate_utility_spec(spec);
  if (spec.coverage != CoverageKind::HullPerimeter)
    throw std::invalid_argument("realize_dag: coverage must be HullPerimeter");
  if (!spec.penalty.is_none())
    throw std::invalid_argument("realize_dag: requires a hedonic spec");

  std::string last_error;
  double epsilon = kInitialEpsilonFactor * kSegmentLength;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    try {
      Layout layout =
          layout_segments(dag, epsilon, seed * 0x9E3779B97F4A7C15ull + attempt);
      pad_group_sizes(layout);
      const ResourceAssignment resources = assign_resources(layout, spec);

      RealizationCertificate cert;
      cert.spec = spec;
      cert.group_resources = resources.per_group;
      cert.delta = resources.delta;
      cert.common_coverage = resources.common_coverage;
      cert.topo_order = layout.topo_order;
      cert.epsilon_used = epsilon;
      cert.attempts = attempt + 1;

      std::vector<Agent> agents;
      std::vector<std::vector<int>> groups;
      for (int k = 0; k < layout.m; ++k) {
        std::vector<int> members;
        for (const auto& p : layout.groups[static_cast<size_t>(k)].all_points()) {
          const int id = static_cast<int>(agents.size());
          agents.push_back({id, p, resources.per_group[static_cast<size_t>(k)]});
          members.push_back(id);
        }
        groups.push_back(std::move(members));
        cert.group_sizes.push_back(layout.groups[static_cast<size_t>(k)].size());
      }
      cert.instance = make_instance(2, std::move(agents));
      cert.partition = make_partition(cert.instance, spec, groups);
      if (cert.partition.groups != groups)
        throw std::runtime_error("canonical group order diverged from construction order");

      cert.checks.sizes_strictly_decreasing = true;
      for (size_t k = 1; k < cert.group_sizes.size(); ++k)
        if (cert.group_sizes[k] >= cert.group_sizes[k - 1])
          cert.checks.sizes_strictly_decreasing = false;

      cert.checks.growth_condition_holds = true;
      if (layout.m > 1) {
        for (int k = 0; k + 1 < layout.m; ++k) {
          const double r_next = resources.per_group[static_cast<size_t>(k + 1)];
          if (!check_growth_condition(spec.power, r_next, resources.common_coverage,
                                      resources.delta)
                   .satisfied)
            cert.checks.growth_condition_holds = false;
        }
      }

      cert.checks.ae_verified = check_ae(cert.instance, cert.partition, spec).is_ae;

      const EncroachmentGraph graph = encroachment_graph(cert.instance, cert.partition);
      cert.checks.graph_matches = graph.edges == layout.edges_topo;
      if (!cert.checks.graph_matches) {
        std::ostringstream os;
        os << "encroachment graph mismatch; symmetric difference:";
        for (const auto& e : graph.edges)
          if (std::find(layout.edges_topo.begin(), layout.edges_topo.end(), e) ==
              layout.edges_topo.end())
            os << " +(" << e.first << "," << e.second << ")";
        for (const auto& e : layout.edges_topo)
          if (std::find(graph.edges.begin(), graph.edges.end(), e) == graph.edges.end())
            os << " -(" << e.first << "," << e.second << ")";
        throw std::runtime_error(os.str());
      }
      if (!cert.checks.ae_verified)
        throw std::runtime_error("constructed partition failed the AE check");
      return cert;
    } catch (const LayoutError& err) {
      last_error = std::string("layout: ") + err.what();
      epsilon = std::min(err.suggested_epsilon, epsilon / 2);
    } catch (const std::runtime_error& err) {
      last_error = err.what();
      epsilon /= 2;
    }
  }
  throw std::runtime_error("realize_dag failed after " + std::to_string(kMaxAttempts) +
                           " attempts; last error: " + last_error);
}

std::vector<LemmaInequalityRecord> evaluate_lemma_inequalities(
    const RealizationCertificate& cert) {
  std::vector<LemmaInequalityRecord> records;
  const int m = static_cast<int>(cert.group_resources.size());
  const auto& f = cert.spec.power;
  const double d_g = cert.common_coverage;
  const double delta = cert.delta;

  for (int k = 0; k + 1 < m; ++k) {
    const double r_k = cert.group_resources[static_cast<size_t>(k)];
    const double n_k = cert.group_sizes[static_cast<size_t>(k)];
    const double r_next = cert.group_resources[static_cast<size_t>(k + 1)];
    LemmaInequalityRecord rec;
    rec.k = k + 1;
    rec.k_prime = 0;
    rec.lhs = f(r_k * n_k + r_next, d_g + delta);
    rec.rhs = f(r_k * n_k, d_g);
    rec.holds = rec.lhs < rec.rhs;
    records.push_back(rec);
  }
  for (int k = 0; k < m; ++k) {
    for (int kp = k + 1; kp < m; ++kp) {
      const double r_k = cert.group_resources[static_cast<size_t>(k)];
      const double n_k = cert.group_sizes[static_cast<size_t>(k)];
      const double r_kp = cert.group_resources[static_cast<size_t>(kp)];
      const double n_kp = cert.group_sizes[static_cast<size_t>(kp)];
      LemmaInequalityRecord rec;
      rec.k = k + 1;
      rec.k_prime = kp + 1;
      rec.lhs = f(r_kp * n_kp + r_k, d_g + delta);
      rec.rhs = f(r_k * n_k, d_g);
      rec.holds = rec.lhs < rec.rhs;
      records.push_back(rec);
    }
  }
  return records;
}

}  // namespace gfg
