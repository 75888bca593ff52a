#pragma once

#include <cstdint>
#include <string>

#include "gfg/dynamics.hpp"
#include "gfg/model.hpp"
#include "gfg/realize.hpp"
#include "gfg/structure.hpp"

namespace gfg {

struct LoadedInstance {
  Instance instance;
  UtilitySpec spec;
};

// Instance files: {"dimension", "agents": [{"id", "x", "r"}], "utility":
// {"coverage", "power", "penalty", "epsilon"}}. Schema errors carry a
// JSON pointer to the offending field. Save emits one canonical form so
// load/save round-trips are byte-identical.
LoadedInstance load_instance(const std::string& path);
LoadedInstance parse_instance(const std::string& text);
std::string instance_to_json(const Instance& instance, const UtilitySpec& spec);
void save_instance(const std::string& path, const Instance& instance,
                   const UtilitySpec& spec);

// Partition files: {"groups": [[ids...], ...]}.
Partition load_partition(const std::string& path, const Instance& instance,
                         const UtilitySpec& spec);
std::string partition_to_json(const Partition& partition);
void save_partition(const std::string& path, const Partition& partition);

struct GenParams {
  double box = 10.0;    // locations uniform in [0, box]^d
  double r_min = 0.5;   // resources log-uniform in [r_min, r_max]
  double r_max = 2.0;
};

Instance gen_random(int n, int dimension, uint64_t seed, const GenParams& params = {});

// Trace CSV: step,movers,from,to,u_before,u_after,psi_0..psi_{n-1}.
// Mover ids are '|'-separated; to is "new" for fresh groups.
std::string trace_to_csv(const Instance& instance, const DynamicsResult& result);
void save_trace_csv(const std::string& path, const Instance& instance,
                    const DynamicsResult& result);

// DOT digraph of the encroachment structure. Node labels carry group
// index, size, resources and utility; nested edges are drawn bold.
std::string graph_to_dot(const EncroachmentGraph& graph, const Instance& instance,
                         const Partition& partition);

// DAG files: an edge list ("u v" per line, '#' comments, optional
// "nodes N" header) or a DOT digraph subset (integer ids, "a -> b;" and
// bare node statements).
DagInput load_dag(const std::string& path);
DagInput parse_dag(const std::string& text);

}  // namespace gfg
