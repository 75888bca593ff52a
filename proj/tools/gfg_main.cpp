#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gfg/dynamics.hpp"
#include "gfg/io.hpp"
#include "gfg/model.hpp"
#include "gfg/psae.hpp"
#include "gfg/realize.hpp"
#include "gfg/structure.hpp"
#include "gfg/verify.hpp"

namespace {

using namespace gfg;

constexpr int kExitOk = 0;
constexpr int kExitNotEquilibrium = 1;
constexpr int kExitUsage = 2;

// "0,1;2,3" -> {{0,1},{2,3}}
std::vector<std::vector<int>> parse_groups_arg(const std::string& arg) {
  std::vector<std::vector<int>> groups;
  std::istringstream gs(arg);
  std::string chunk;
  while (std::getline(gs, chunk, ';')) {
    std::vector<int> members;
    std::istringstream ms(chunk);
    std::string tok;
    while (std::getline(ms, tok, ',')) {
      if (tok.empty()) continue;
      members.push_back(std::stoi(tok));
    }
    if (!members.empty()) groups.push_back(std::move(members));
  }
  if (groups.empty()) throw std::runtime_error("--groups parsed to an empty partition");
  return groups;
}

Partition resolve_partition(const LoadedInstance& loaded, const std::string& groups_arg,
                            const std::string& partition_path) {
  if (!groups_arg.empty() && !partition_path.empty())
    throw std::runtime_error("give either --groups or --partition, not both");
  if (!groups_arg.empty())
    return make_partition(loaded.instance, loaded.spec, parse_groups_arg(groups_arg));
  if (!partition_path.empty())
    return load_partition(partition_path, loaded.instance, loaded.spec);
  throw std::runtime_error("a partition is required (--groups or --partition)");
}

std::string describe_deviation(const Deviation& dev) {
  std::ostringstream os;
  os << "agents {";
  for (size_t i = 0; i < dev.movers.size(); ++i) {
    if (i) os << ",";
    os << dev.movers[i];
  }
  os << "} leave group " << dev.from_group << " for ";
  if (dev.to_group == kNewGroup)
    os << "a new group";
  else
    os << "group " << dev.to_group;
  os << " (utility " << dev.utility_before << " -> " << dev.utility_after << ")";
  return os.str();
}

void print_partition_utilities(const Instance& instance, const Partition& p) {
  for (int g = 0; g < p.group_count(); ++g) {
    std::printf("  G%d = {", g);
    for (size_t i = 0; i < p.groups[static_cast<size_t>(g)].size(); ++i)
      std::printf("%s%d", i ? "," : "", p.groups[static_cast<size_t>(g)][i]);
    std::printf("}  n=%zu  R=%.6g  U=%.9g\n", p.groups[static_cast<size_t>(g)].size(),
                group_resources(instance, p.groups[static_cast<size_t>(g)]),
                p.utilities[static_cast<size_t>(g)]);
  }
}

int cmd_gen(const std::string& out, int n, int d, uint64_t seed, const GenParams& params,
            const std::string& coverage) {
  Instance inst = gen_random(n, d, seed, params);
  UtilitySpec spec;
  spec.coverage = coverage_from_string(coverage);
  validate_utility_spec(spec);
  if (out.empty())
    std::fputs(instance_to_json(inst, spec).c_str(), stdout);
  else
    save_instance(out, inst, spec);
  return kExitOk;
}

int cmd_solve(const std::string& in, const std::string& mode_str,
              const std::string& policy_str, uint64_t seed, int max_subset,
              int max_iters, const std::string& init, const std::string& groups_arg,
              const std::string& trace_path, const std::string& out_partition) {
  const LoadedInstance loaded = load_instance(in);
  const EquilibriumKind mode =
      mode_str == "ae" ? EquilibriumKind::AE : EquilibriumKind::SAE;
  DeviationPolicy policy = DeviationPolicy::FirstFound;
  if (policy_str == "best")
    policy = DeviationPolicy::BestPotential;
  else if (policy_str == "random")
    policy = DeviationPolicy::SeededRandom;
  else if (policy_str != "first")
    throw std::runtime_error("unknown policy: " + policy_str);

  Partition start = groups_arg.empty()
                        ? (init == "grand"
                               ? grand_coalition_partition(loaded.instance, loaded.spec)
                               : singletons_partition(loaded.instance, loaded.spec))
                        : make_partition(loaded.instance, loaded.spec,
                                         parse_groups_arg(groups_arg));

  const DynamicsResult result = run_dynamics(loaded.instance, start, loaded.spec, mode,
                                             policy, seed, max_subset, max_iters);
  std::printf("%s after %zu step(s); %s\n",
              result.converged ? "converged" : "did not converge", result.steps.size(),
              to_string(result.final_partition).c_str());
  print_partition_utilities(loaded.instance, result.final_partition);
  if (!trace_path.empty()) save_trace_csv(trace_path, loaded.instance, result);
  if (!out_partition.empty()) save_partition(out_partition, result.final_partition);
  return result.converged ? kExitOk : kExitNotEquilibrium;
}

int cmd_check(const std::string& in, const std::string& kind,
              const std::string& groups_arg, const std::string& partition_path,
              int max_subset) {
  const LoadedInstance loaded = load_instance(in);
  const Partition partition = resolve_partition(loaded, groups_arg, partition_path);
  if (kind == "ae") {
    const AeVerdict verdict = check_ae(loaded.instance, partition, loaded.spec);
    if (verdict.is_ae) {
      std::printf("AE confirmed: %s\n", to_string(partition).c_str());
      return kExitOk;
    }
    std::printf("not an AE: %s\n", describe_deviation(*verdict.witness).c_str());
    return kExitNotEquilibrium;
  }
  if (kind != "sae") throw std::runtime_error("unknown kind: " + kind);
  const SaeVerdict verdict = check_sae(loaded.instance, partition, loaded.spec, max_subset);
  switch (verdict.kind) {
    case SaeVerdict::Kind::IsSae:
      std::printf("SAE confirmed: %s\n", to_string(partition).c_str());
      return kExitOk;
    case SaeVerdict::Kind::SaeUpToSize:
      std::printf("SAE up to subset size %d: %s\n", verdict.subset_cap,
                  to_string(partition).c_str());
      return kExitOk;
    case SaeVerdict::Kind::NotSae:
      std::printf("not an SAE: %s\n", describe_deviation(*verdict.witness).c_str());
      return kExitNotEquilibrium;
  }
  return kExitUsage;
}

int cmd_psae(const std::string& in, bool fast, bool oracle, int cap) {
  const LoadedInstance loaded = load_instance(in);
  Partition partition;
  if (fast) {
    const PsaeFastResult result = psae_diameter_fast(loaded.instance, loaded.spec, oracle, cap);
    partition = result.partition;
    std::printf("psae (diameter fast path): %s\n", to_string(partition).c_str());
    int iter = 0;
    for (const auto& it : result.diagnostics.iterations) {
      std::printf("  iteration %d: pool=%d candidates=%d%s\n", ++iter, it.pool_size,
                  it.candidates_evaluated, it.tie_break_fired ? " (tie-break fired)" : "");
    }
    if (result.diagnostics.oracle_checked) {
      std::printf("  oracle: %s (fast U1=%.12g, brute U1=%.12g)\n",
                  result.diagnostics.oracle_agrees ? "agrees" : "DISAGREES",
                  result.diagnostics.fast_first_utility,
                  result.diagnostics.brute_first_utility);
    }
  } else {
    partition = psae_bruteforce(loaded.instance, loaded.spec, cap);
    std::printf("psae (exact): %s\n", to_string(partition).c_str());
  }
  print_partition_utilities(loaded.instance, partition);
  const SaeVerdict verdict = check_sae(loaded.instance, partition, loaded.spec);
  std::printf("sae check: %s\n", verdict.kind == SaeVerdict::Kind::IsSae ? "pass" : "FAIL");
  return verdict.kind == SaeVerdict::Kind::IsSae ? kExitOk : kExitNotEquilibrium;
}

int cmd_analyze(const std::string& in, const std::string& groups_arg,
                const std::string& partition_path, const std::string& dot_path,
                double tol) {
  const LoadedInstance loaded = load_instance(in);
  const Partition partition = resolve_partition(loaded, groups_arg, partition_path);
  const EncroachmentGraph graph = encroachment_graph(loaded.instance, partition, tol);

  std::printf("groups:\n");
  print_partition_utilities(loaded.instance, partition);
  std::printf("pair relations:\n");
  for (const auto& label : graph.labels) {
    switch (label.relation) {
      case PairRelation::EncroachesOn:
        std::printf("  G%d encroaches on G%d\n", label.from, label.to);
        break;
      case PairRelation::Nested:
        std::printf("  G%d nested inside G%d\n", label.from, label.to);
        break;
      default:
        std::printf("  G%d, G%d: %s\n", label.from, label.to,
                    to_string(label.relation).c_str());
    }
  }
  std::printf("encroachment edges:");
  for (const auto& e : graph.edges) std::printf(" G%d->G%d", e.first, e.second);
  std::printf("%s\n", graph.edges.empty() ? " (none)" : "");

  if (!dot_path.empty()) {
    std::ofstream out(dot_path);
    out << graph_to_dot(graph, loaded.instance, partition);
  }

  if (!loaded.spec.penalty.is_none()) {
    std::printf("theorem report: skipped (penalty term present)\n");
    return kExitOk;
  }
  if (!check_ae(loaded.instance, partition, loaded.spec).is_ae) {
    std::printf("theorem report: skipped (partition is not an AE)\n");
    return kExitOk;
  }
  const StructureReport report =
      assert_structure_theorems(loaded.instance, partition, loaded.spec, tol);
  std::printf("theorem report: mutual-encroachment-free=%s acyclic=%s edge-utilities=%s\n",
              report.no_mutual_encroachment ? "yes" : "NO",
              report.acyclic ? "yes" : "NO", report.edge_utilities_ok ? "ok" : "VIOLATED");
  for (const auto& e : report.near_tie_edges)
    std::printf("  near-tie edge G%d->G%d\n", e.first, e.second);
  return report.passed() ? kExitOk : kExitNotEquilibrium;
}

int cmd_enumerate(const std::string& in, const std::string& kind) {
  const LoadedInstance loaded = load_instance(in);
  const EquilibriumKind k = kind == "ae" ? EquilibriumKind::AE : EquilibriumKind::SAE;
  if (kind != "ae" && kind != "sae") throw std::runtime_error("unknown kind: " + kind);
  const auto equilibria = enumerate_equilibria(loaded.instance, loaded.spec, k);
  std::printf("%zu %s equilibria\n", equilibria.size(), kind.c_str());
  for (const auto& p : equilibria) std::printf("  %s\n", to_string(p).c_str());
  return kExitOk;
}

int cmd_realize(const std::string& dag_path, const std::string& out,
                const std::string& partition_out, uint64_t seed) {
  const DagInput dag = load_dag(dag_path);
  UtilitySpec spec;
  spec.coverage = CoverageKind::HullPerimeter;
  const RealizationCertificate cert = realize_dag(dag, spec, seed);

  std::printf("realized %d-node dag with %zu agents (attempt %d, epsilon %.3g)\n",
              dag.node_count, cert.instance.agents.size(), cert.attempts,
              cert.epsilon_used);
  std::printf("  checks: ae=%s graph=%s sizes=%s growth=%s\n",
              cert.checks.ae_verified ? "pass" : "FAIL",
              cert.checks.graph_matches ? "pass" : "FAIL",
              cert.checks.sizes_strictly_decreasing ? "pass" : "FAIL",
              cert.checks.growth_condition_holds ? "pass" : "FAIL");
  std::printf("  delta=%.6g common coverage=%.6g\n", cert.delta, cert.common_coverage);
  std::printf("  group resources:");
  for (double r : cert.group_resources) std::printf(" %.6g", r);
  std::printf("\n  group sizes:");
  for (int s : cert.group_sizes) std::printf(" %d", s);
  std::printf("\n");
  int lemma_ok = 0, lemma_total = 0;
  for (const auto& rec : evaluate_lemma_inequalities(cert)) {
    ++lemma_total;
    if (rec.holds) ++lemma_ok;
  }
  std::printf("  blocking inequalities: %d/%d hold\n", lemma_ok, lemma_total);

  if (!out.empty()) {
    save_instance(out, cert.instance, cert.spec);
    const std::string ppath = partition_out.empty() ? out + ".partition.json" : partition_out;
    save_partition(ppath, cert.partition);
    std::printf("  wrote %s and %s\n", out.c_str(), ppath.c_str());
  }
  return cert.checks.all() && lemma_ok == lemma_total ? kExitOk : kExitNotEquilibrium;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group formation game: dynamics, equilibrium checks, encroachment "
               "analysis, and DAG realization"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  int gen_n = 5, gen_d = 2;
  uint64_t gen_seed = 0;
  GenParams gen_params;
  std::string gen_out, gen_coverage = "diameter";
  gen->add_option("--n", gen_n, "number of agents (>= 2)");
  gen->add_option("--d", gen_d, "dimension");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--box", gen_params.box, "location box size");
  gen->add_option("--rmin", gen_params.r_min, "min resource");
  gen->add_option("--rmax", gen_params.r_max, "max resource");
  gen->add_option("--coverage", gen_coverage, "diameter|hull_volume|hull_perimeter");
  gen->add_option("--out", gen_out, "output instance file (stdout when omitted)");

  // solve
  auto* solve = app.add_subcommand("solve", "run improvement dynamics to an equilibrium");
  std::string solve_in, solve_mode = "sae", solve_policy = "first", solve_init = "singletons";
  std::string solve_groups, solve_trace, solve_out_partition;
  uint64_t solve_seed = 0;
  int solve_max_subset = std::numeric_limits<int>::max();
  int solve_max_iters = 100000;
  solve->add_option("--in", solve_in, "instance file")->required();
  solve->add_option("--mode", solve_mode, "ae|sae");
  solve->add_option("--policy", solve_policy, "first|best|random");
  solve->add_option("--seed", solve_seed, "seed for the random policy");
  solve->add_option("--max-subset", solve_max_subset, "cap on deviating subset size");
  solve->add_option("--max-iters", solve_max_iters, "iteration limit");
  solve->add_option("--init", solve_init, "singletons|grand");
  solve->add_option("--groups", solve_groups, "initial partition, e.g. \"0,1;2\"");
  solve->add_option("--trace", solve_trace, "write the step trace CSV here");
  solve->add_option("--out-partition", solve_out_partition, "write the final partition here");

  // check
  auto* check = app.add_subcommand("check", "verify a partition is an AE/SAE");
  std::string check_in, check_kind = "ae", check_groups, check_partition;
  int check_max_subset = std::numeric_limits<int>::max();
  check->add_option("--in", check_in, "instance file")->required();
  check->add_option("--kind", check_kind, "ae|sae");
  check->add_option("--groups", check_groups, "partition, e.g. \"0,1;2\"");
  check->add_option("--partition", check_partition, "partition JSON file");
  check->add_option("--max-subset", check_max_subset, "subset size cap for sae");

  // psae
  auto* psae = app.add_subcommand("psae", "construct a power-maximal SAE");
  std::string psae_in;
  bool psae_fast = false, psae_oracle = false;
  int psae_cap = 20;
  psae->add_option("--in", psae_in, "instance file")->required();
  psae->add_flag("--fast", psae_fast, "O(n^3)-candidate diameter fast path");
  psae->add_flag("--oracle-check", psae_oracle, "cross-check the fast path against brute force");
  psae->add_option("--cap", psae_cap, "exact enumeration cap");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "encroachment structure of a partition");
  std::string analyze_in, analyze_groups, analyze_partition, analyze_dot;
  double analyze_tol = kDefaultTol;
  analyze->add_option("--in", analyze_in, "instance file")->required();
  analyze->add_option("--groups", analyze_groups, "partition, e.g. \"0,1;2\"");
  analyze->add_option("--partition", analyze_partition, "partition JSON file");
  analyze->add_option("--dot", analyze_dot, "write a DOT digraph here");
  analyze->add_option("--tol", analyze_tol, "geometric tolerance");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "list all equilibria (n <= 10)");
  std::string enum_in, enum_kind = "sae";
  enumerate->add_option("--in", enum_in, "instance file")->required();
  enumerate->add_option("--kind", enum_kind, "ae|sae");

  // realize
  auto* realize = app.add_subcommand("realize", "build an instance whose AE encroachment graph is a given DAG");
  std::string realize_dag_path, realize_out, realize_partition_out;
  uint64_t realize_seed = 0;
  realize->add_option("--dag", realize_dag_path, "edge-list or DOT digraph file")->required();
  realize->add_option("--out", realize_out, "output instance file");
  realize->add_option("--partition-out", realize_partition_out,
                      "output partition file (default: <out>.partition.json)");
  realize->add_option("--seed", realize_seed, "layout seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_out, gen_n, gen_d, gen_seed, gen_params, gen_coverage);
    if (solve->parsed())
      return cmd_solve(solve_in, solve_mode, solve_policy, solve_seed, solve_max_subset,
                       solve_max_iters, solve_init, solve_groups, solve_trace,
                       solve_out_partition);
    if (check->parsed())
      return cmd_check(check_in, check_kind, check_groups, check_partition, check_max_subset);
    if (psae->parsed()) return cmd_psae(psae_in, psae_fast, psae_oracle, psae_cap);
    if (analyze->parsed())
      return cmd_analyze(analyze_in, analyze_groups, analyze_partition, analyze_dot,
                         analyze_tol);
    if (enumerate->parsed()) return cmd_enumerate(enum_in, enum_kind);
    if (realize->parsed())
      return cmd_realize(realize_dag_path, realize_out, realize_partition_out, realize_seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
