#include "gfg/io.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gfg {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& pointer, const std::string& message) {
  throw std::runtime_error(pointer + ": " + message);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

double require_number(const ordered_json& j, const std::string& pointer) {
  if (!j.is_number()) schema_error(pointer, "expected a number");
  return j.get<double>();
}

int require_int(const ordered_json& j, const std::string& pointer) {
  if (!j.is_number_integer()) schema_error(pointer, "expected an integer");
  return j.get<int>();
}

PowerForm parse_power(const ordered_json& j, const std::string& pointer) {
  if (!j.is_object() || !j.contains("kind")) schema_error(pointer, "expected {\"kind\": ...}");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ratio_linear") return PowerForm::ratio_linear();
  if (kind == "ratio_power")
    return PowerForm::ratio_power(require_number(j.value("alpha", ordered_json(2.0)), pointer + "/alpha"));
  if (kind == "ratio_log_scaled") return PowerForm::ratio_log_scaled();
  if (kind == "affine_tradeoff")
    return PowerForm::affine_tradeoff(
        require_number(j.value("a", ordered_json(1.0)), pointer + "/a"),
        require_number(j.value("b", ordered_json(1.0)), pointer + "/b"));
  schema_error(pointer + "/kind", "unknown power form: " + kind);
}

ordered_json power_to_json(const PowerForm& p) {
  switch (p.kind) {
    case PowerForm::Kind::RatioLinear: return {{"kind", "ratio_linear"}};
    case PowerForm::Kind::RatioPower: return {{"kind", "ratio_power"}, {"alpha", p.alpha}};
    case PowerForm::Kind::RatioLogScaled: return {{"kind", "ratio_log_scaled"}};
    case PowerForm::Kind::AffineTradeoff:
      return {{"kind", "affine_tradeoff"}, {"a", p.a}, {"b", p.b}};
  }
  return {};
}

PenaltyForm parse_penalty(const ordered_json& j, const std::string& pointer) {
  if (!j.is_object() || !j.contains("kind")) schema_error(pointer, "expected {\"kind\": ...}");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return PenaltyForm::none();
  const double beta = require_number(j.value("beta", ordered_json(0.0)), pointer + "/beta");
  if (beta < 0.0) schema_error(pointer + "/beta", "beta must be >= 0");
  if (kind == "resource_scaled") return PenaltyForm::resource_scaled(beta);
  if (kind == "power_scaled") return PenaltyForm::power_scaled(beta);
  schema_error(pointer + "/kind", "unknown penalty form: " + kind);
}

ordered_json penalty_to_json(const PenaltyForm& p) {
  switch (p.kind) {
    case PenaltyForm::Kind::None: return {{"kind", "none"}};
    case PenaltyForm::Kind::ResourceScaled:
      return {{"kind", "resource_scaled"}, {"beta", p.beta}};
    case PenaltyForm::Kind::PowerScaled:
      return {{"kind", "power_scaled"}, {"beta", p.beta}};
  }
  return {};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

LoadedInstance parse_instance(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error("", "expected a JSON object");
  if (!j.contains("dimension")) schema_error("/dimension", "missing");
  const int d = require_int(j.at("dimension"), "/dimension");
  if (!j.contains("agents") || !j.at("agents").is_array())
    schema_error("/agents", "expected an array");

  std::vector<Agent> agents;
  for (size_t i = 0; i < j.at("agents").size(); ++i) {
    const std::string ptr = "/agents/" + std::to_string(i);
    const auto& aj = j.at("agents").at(i);
    if (!aj.is_object()) schema_error(ptr, "expected an object");
    Agent a;
    if (!aj.contains("id")) schema_error(ptr + "/id", "missing");
    a.id = require_int(aj.at("id"), ptr + "/id");
    if (!aj.contains("x") || !aj.at("x").is_array()) schema_error(ptr + "/x", "expected an array");
    for (size_t c = 0; c < aj.at("x").size(); ++c)
      a.location.coords.push_back(
          require_number(aj.at("x").at(c), ptr + "/x/" + std::to_string(c)));
    if (a.location.dim() != d) schema_error(ptr + "/x", "coordinate count differs from dimension");
    if (!aj.contains("r")) schema_error(ptr + "/r", "missing");
    a.resource = require_number(aj.at("r"), ptr + "/r");
    if (!(a.resource > 0.0)) schema_error(ptr + "/r", "resources must be positive");
    agents.push_back(std::move(a));
  }

  LoadedInstance out;
  if (j.contains("utility")) {
    const auto& uj = j.at("utility");
    if (!uj.is_object()) schema_error("/utility", "expected an object");
    if (uj.contains("coverage")) {
      try {
        out.spec.coverage = coverage_from_string(uj.at("coverage").get<std::string>());
      } catch (const std::invalid_argument& e) {
        schema_error("/utility/coverage", e.what());
      }
    }
    if (uj.contains("power")) out.spec.power = parse_power(uj.at("power"), "/utility/power");
    if (uj.contains("penalty"))
      out.spec.penalty = parse_penalty(uj.at("penalty"), "/utility/penalty");
    if (uj.contains("epsilon")) {
      out.spec.epsilon = require_number(uj.at("epsilon"), "/utility/epsilon");
      if (!(out.spec.epsilon > 0.0)) schema_error("/utility/epsilon", "epsilon must be > 0");
    }
  }

  try {
    out.instance = make_instance(d, std::move(agents));
    validate_utility_spec(out.spec);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid instance: ") + e.what());
  }
  return out;
}

LoadedInstance load_instance(const std::string& path) {
  return parse_instance(read_file(path));
}

std::string instance_to_json(const Instance& instance, const UtilitySpec& spec) {
  ordered_json j;
  j["dimension"] = instance.dimension;
  j["agents"] = ordered_json::array();
  for (const auto& a : instance.agents) {
    ordered_json aj;
    aj["id"] = a.id;
    aj["x"] = a.location.coords;
    aj["r"] = a.resource;
    j["agents"].push_back(std::move(aj));
  }
  j["utility"] = {{"coverage", to_string(spec.coverage)},
                  {"power", power_to_json(spec.power)},
                  {"penalty", penalty_to_json(spec.penalty)},
                  {"epsilon", spec.epsilon}};
  return j.dump(2) + "\n";
}

void save_instance(const std::string& path, const Instance& instance,
                   const UtilitySpec& spec) {
  write_file(path, instance_to_json(instance, spec));
}

Partition load_partition(const std::string& path, const Instance& instance,
                         const UtilitySpec& spec) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("groups") || !j.at("groups").is_array())
    schema_error("/groups", "expected an array of arrays");
  std::vector<std::vector<int>> groups;
  for (size_t g = 0; g < j.at("groups").size(); ++g) {
    const auto& gj = j.at("groups").at(g);
    if (!gj.is_array()) schema_error("/groups/" + std::to_string(g), "expected an array");
    std::vector<int> members;
    for (size_t i = 0; i < gj.size(); ++i)
      members.push_back(require_int(gj.at(i), "/groups/" + std::to_string(g) + "/" +
                                                   std::to_string(i)));
    groups.push_back(std::move(members));
  }
  try {
    return make_partition(instance, spec, std::move(groups));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid partition: ") + e.what());
  }
}

std::string partition_to_json(const Partition& partition) {
  ordered_json j;
  j["groups"] = partition.groups;
  return j.dump(2) + "\n";
}

void save_partition(const std::string& path, const Partition& partition) {
  write_file(path, partition_to_json(partition));
}

Instance gen_random(int n, int dimension, uint64_t seed, const GenParams& params) {
  if (n < 2) throw std::invalid_argument("gen_random: n must be >= 2");
  if (dimension < 1) throw std::invalid_argument("gen_random: dimension must be >= 1");
  if (!(params.r_min > 0.0) || params.r_max < params.r_min)
    throw std::invalid_argument("gen_random: need 0 < r_min <= r_max");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, params.box);
  std::uniform_real_distribution<double> logr(std::log(params.r_min),
                                              std::log(params.r_max));
  std::vector<Agent> agents;
  for (int id = 0; id < n; ++id) {
    Agent a;
    a.id = id;
    for (int c = 0; c < dimension; ++c) a.location.coords.push_back(coord(rng));
    a.resource = std::exp(logr(rng));
    agents.push_back(std::move(a));
  }
  return make_instance(dimension, std::move(agents));
}

std::string trace_to_csv(const Instance& instance, const DynamicsResult& result) {
  std::ostringstream os;
  os << "step,movers,from,to,u_before,u_after";
  for (int i = 0; i < instance.size(); ++i) os << ",psi_" << i;
  os << "\n";
  for (size_t s = 0; s < result.steps.size(); ++s) {
    const auto& step = result.steps[s];
    os << (s + 1) << ",";
    for (size_t i = 0; i < step.deviation.movers.size(); ++i) {
      if (i) os << "|";
      os << step.deviation.movers[i];
    }
    os << "," << step.deviation.from_group << ",";
    if (step.deviation.to_group == kNewGroup)
      os << "new";
    else
      os << step.deviation.to_group;
    os << "," << format_double(step.deviation.utility_before) << ","
       << format_double(step.deviation.utility_after);
    for (double v : step.psi_after.values) os << "," << format_double(v);
    os << "\n";
  }
  return os.str();
}

void save_trace_csv(const std::string& path, const Instance& instance,
                    const DynamicsResult& result) {
  write_file(path, trace_to_csv(instance, result));
}

std::string graph_to_dot(const EncroachmentGraph& graph, const Instance& instance,
                         const Partition& partition) {
  std::ostringstream os;
  os << "digraph encroachment {\n";
  os << "  node [shape=box];\n";
  for (int g = 0; g < graph.group_count; ++g) {
    char label[128];
    std::snprintf(label, sizeof(label), "G%d\\nn=%zu R=%.6g U=%.6g", g,
                  partition.groups[static_cast<size_t>(g)].size(),
                  group_resources(instance, partition.groups[static_cast<size_t>(g)]),
                  partition.utilities[static_cast<size_t>(g)]);
    os << "  g" << g << " [label=\"" << label << "\"];\n";
  }
  for (const auto& [from, to] : graph.edges) {
    bool nested = false;
    for (const auto& label : graph.labels)
      if (label.relation == PairRelation::Nested && label.from == from && label.to == to)
        nested = true;
    os << "  g" << from << " -> g" << to;
    if (nested) os << " [style=bold]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

namespace {

DagInput parse_dag_dot(const std::string& text) {
  const size_t open = text.find('{');
  const size_t close = text.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::runtime_error("malformed DOT digraph");
  std::string body = text.substr(open + 1, close - open - 1);
  for (char& c : body)
    if (c == ';' || c == '\n' || c == '\t') c = ' ';

  std::vector<std::pair<int, int>> edges;
  int max_node = -1;
  std::istringstream in(body);
  std::string tok;
  std::vector<std::string> tokens;
  while (in >> tok) tokens.push_back(tok);
  auto parse_node = [](const std::string& t) {
    try {
      size_t pos = 0;
      const int v = std::stoi(t, &pos);
      if (pos != t.size() || v < 0) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error("DOT node ids must be non-negative integers (got '" + t +
                               "')");
    }
  };
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "->") throw std::runtime_error("DOT edge missing source node");
    const int a = parse_node(tokens[i]);
    max_node = std::max(max_node, a);
    if (i + 2 < tokens.size() && tokens[i + 1] == "->") {
      const int b = parse_node(tokens[i + 2]);
      max_node = std::max(max_node, b);
      edges.emplace_back(a, b);
      i += 2;
      // chained edges: a -> b -> c
      while (i + 2 < tokens.size() && tokens[i + 1] == "->") {
        const int c = parse_node(tokens[i + 2]);
        max_node = std::max(max_node, c);
        edges.emplace_back(edges.back().second, c);
        i += 2;
      }
    }
  }
  if (max_node < 0) throw std::runtime_error("DOT digraph has no nodes");
  return make_dag(max_node + 1, std::move(edges));
}

}  // namespace

DagInput parse_dag(const std::string& text) {
  // DOT subset when the first non-comment token says so.
  std::istringstream probe(text);
  std::string first;
  probe >> first;
  if (first == "digraph") return parse_dag_dot(text);

  std::vector<std::pair<int, int>> edges;
  int declared_nodes = -1;
  int max_node = -1;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "nodes") {
      if (!(ls >> declared_nodes) || declared_nodes < 1)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": nodes header needs a positive count");
      continue;
    }
    int a = 0, b = 0;
    try {
      size_t pos = 0;
      a = std::stoi(head, &pos);
      if (pos != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'u v'");
    }
    if (!(ls >> b))
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'u v'");
    edges.emplace_back(a, b);
    max_node = std::max({max_node, a, b});
  }
  const int nodes = declared_nodes > 0 ? declared_nodes : max_node + 1;
  if (nodes < 1)
    throw std::runtime_error("dag file has no edges; add a 'nodes N' header");
  return make_dag(nodes, std::move(edges));
}

DagInput load_dag(const std::string& path) { return parse_dag(read_file(path)); }

}  // namespace gfg
