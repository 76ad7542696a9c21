#include "firetree/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace firetree {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const char* what) {
  if (!j.is_object())
    throw Error(ErrorCode::BadInput, std::string(what) + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw Error(ErrorCode::BadInput,
                  std::string(what) + ": unknown key '" + it.key() + "'");
}

int require_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw Error(ErrorCode::BadInput,
                std::string("missing or non-integer field '") + key + "'");
  return j[key].get<int>();
}

}  // namespace

ordered_json instance_to_json(const TreeInstance& inst,
                              const std::map<std::string, double>& meta) {
  ordered_json j;
  j["n"] = inst.vertex_count();
  ordered_json edges = ordered_json::array();
  for (auto [u, v] : inst.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  j["root"] = inst.root();
  j["target_set"] = inst.target_set();
  if (!inst.weights().empty()) {
    ordered_json w = ordered_json::object();
    for (auto [v, wt] : inst.weights()) w[std::to_string(v)] = wt;
    j["weights"] = std::move(w);
  }
  if (inst.budgets().size() == 1)
    j["budget"] = inst.budgets()[0];
  else
    j["budgets"] = inst.budgets();
  if (!inst.forbidden().empty()) {
    ordered_json f = ordered_json::array();
    for (const Move& m : inst.forbidden()) f.push_back({m.vertex, m.time});
    j["forbidden"] = std::move(f);
  }
  if (!meta.empty()) {
    ordered_json m = ordered_json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    j["meta"] = std::move(m);
  }
  return j;
}

TreeInstance instance_from_json(const json& j,
                                std::map<std::string, double>* meta) {
  reject_unknown_keys(j,
                      {"n", "edges", "root", "target_set", "weights", "budget",
                       "budgets", "forbidden", "meta"},
                      "instance");
  const int n = require_int(j, "n");
  const Vertex root = require_int(j, "root");
  if (!j.contains("edges") || !j["edges"].is_array())
    throw Error(ErrorCode::BadInput, "missing or non-array field 'edges'");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw Error(ErrorCode::BadInput, "edges entries must be [u, v] int pairs");
    edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>()});
  }
  if (!j.contains("target_set") || !j["target_set"].is_array())
    throw Error(ErrorCode::BadInput, "missing or non-array field 'target_set'");
  std::set<Vertex> targets;
  for (const auto& t : j["target_set"]) {
    if (!t.is_number_integer())
      throw Error(ErrorCode::BadInput, "target_set entries must be integers");
    targets.insert(t.get<Vertex>());
  }
  std::map<Vertex, Weight> weights;
  if (j.contains("weights")) {
    if (!j["weights"].is_object())
      throw Error(ErrorCode::BadInput, "'weights' must be an object");
    for (auto it = j["weights"].begin(); it != j["weights"].end(); ++it) {
      if (!it.value().is_number_integer())
        throw Error(ErrorCode::BadInput, "weight values must be integers");
      Vertex v;
      try {
        v = std::stoi(it.key());
      } catch (const std::exception&) {
        throw Error(ErrorCode::BadInput,
                    "weight keys must be integer vertex ids");
      }
      weights[v] = it.value().get<Weight>();
    }
  }
  if (j.contains("budget") && j.contains("budgets"))
    throw Error(ErrorCode::BadInput, "'budget' and 'budgets' are exclusive");
  std::vector<Weight> budgets{1};
  if (j.contains("budget")) {
    if (!j["budget"].is_number_integer())
      throw Error(ErrorCode::BadInput, "'budget' must be an integer");
    budgets = {j["budget"].get<Weight>()};
  } else if (j.contains("budgets")) {
    if (!j["budgets"].is_array() || j["budgets"].empty())
      throw Error(ErrorCode::BadInput, "'budgets' must be a non-empty array");
    budgets.clear();
    for (const auto& b : j["budgets"]) {
      if (!b.is_number_integer())
        throw Error(ErrorCode::BadInput, "'budgets' entries must be integers");
      budgets.push_back(b.get<Weight>());
    }
  }
  std::set<Move> forbidden;
  if (j.contains("forbidden")) {
    if (!j["forbidden"].is_array())
      throw Error(ErrorCode::BadInput, "'forbidden' must be an array");
    for (const auto& f : j["forbidden"]) {
      if (!f.is_array() || f.size() != 2 || !f[0].is_number_integer() ||
          !f[1].is_number_integer())
        throw Error(ErrorCode::BadInput,
                    "forbidden entries must be [vertex, time] int pairs");
      forbidden.insert({f[0].get<Vertex>(), f[1].get<TimeStep>()});
    }
  }
  if (meta) {
    meta->clear();
    if (j.contains("meta")) {
      if (!j["meta"].is_object())
        throw Error(ErrorCode::BadInput, "'meta' must be an object");
      for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it) {
        if (!it.value().is_number())
          throw Error(ErrorCode::BadInput, "meta values must be numbers");
        (*meta)[it.key()] = it.value().get<double>();
      }
    }
  }
  return TreeInstance::build(n, std::move(edges), root, std::move(targets),
                             std::move(weights), std::move(budgets),
                             std::move(forbidden));
}

ordered_json strategy_to_json(const Strategy& strat) {
  ordered_json moves = ordered_json::array();
  for (const Move& m : strat.moves())
    moves.push_back({{"vertex", m.vertex}, {"time", m.time}});
  return ordered_json{{"moves", std::move(moves)}};
}

Strategy strategy_from_json(const json& j) {
  reject_unknown_keys(j, {"moves"}, "strategy");
  if (!j.contains("moves") || !j["moves"].is_array())
    throw Error(ErrorCode::BadInput, "missing or non-array field 'moves'");
  std::vector<Move> moves;
  for (const auto& m : j["moves"]) {
    reject_unknown_keys(m, {"vertex", "time"}, "move");
    moves.push_back({require_int(m, "vertex"), require_int(m, "time")});
  }
  return Strategy::of(std::move(moves));
}

ordered_json outcome_to_json(const SimulationOutcome& out, bool trace) {
  ordered_json j;
  j["burned"] = out.burned;
  j["saved"] = out.saved;
  ordered_json applied = ordered_json::array();
  for (const Move& m : out.protected_applied)
    applied.push_back({{"vertex", m.vertex}, {"time", m.time}});
  j["protected"] = std::move(applied);
  j["end_time"] = out.end_time;
  if (trace) {
    ordered_json steps = ordered_json::array();
    for (const StepRecord& rec : out.trace)
      steps.push_back({{"step", rec.step},
                       {"protected_now", rec.protected_now},
                       {"newly_burned", rec.newly_burned}});
    j["trace"] = std::move(steps);
  }
  return j;
}

SimulationOutcome outcome_from_json(const json& j) {
  reject_unknown_keys(
      j, {"burned", "saved", "protected", "end_time", "trace",
          "saved_target_weight"},
      "outcome");
  SimulationOutcome out;
  auto read_set = [&](const char* key, std::set<Vertex>& into) {
    if (!j.contains(key) || !j[key].is_array())
      throw Error(ErrorCode::BadInput,
                  std::string("missing or non-array field '") + key + "'");
    for (const auto& v : j[key]) into.insert(v.get<Vertex>());
  };
  read_set("burned", out.burned);
  read_set("saved", out.saved);
  if (j.contains("protected"))
    for (const auto& m : j["protected"])
      out.protected_applied.insert(
          {require_int(m, "vertex"), require_int(m, "time")});
  out.end_time = require_int(j, "end_time");
  if (j.contains("trace"))
    for (const auto& rec : j["trace"]) {
      StepRecord sr;
      sr.step = require_int(rec, "step");
      for (const auto& v : rec["protected_now"])
        sr.protected_now.push_back(v.get<Vertex>());
      for (const auto& v : rec["newly_burned"])
        sr.newly_burned.push_back(v.get<Vertex>());
      out.trace.push_back(std::move(sr));
    }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadInput, path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write " + tmp);
    out << contents;
    if (!out) throw Error(ErrorCode::BadInput, "write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error(ErrorCode::BadInput, "rename failed for " + path);
}

}  // namespace firetree
