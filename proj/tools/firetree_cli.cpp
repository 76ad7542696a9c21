#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "firetree/core.hpp"
#include "firetree/generators.hpp"
#include "firetree/io.hpp"
#include "firetree/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace firetree;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNoSolver = 3;
constexpr int kExitPrecondition = 4;
constexpr int kExitInvalidStrategy = 5;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NoApplicableSolver:
      return kExitNoSolver;
    case ErrorCode::PreconditionViolated:
    case ErrorCode::NotAStar:
    case ErrorCode::NotACaterpillar:
    case ErrorCode::InstanceTooLarge:
    case ErrorCode::DegreeTooHigh:
    case ErrorCode::EpsilonOutOfRange:
    case ErrorCode::ShapeInfeasible:
      return kExitPrecondition;
    default:
      return kExitParse;
  }
}

void write_json(const std::string& path, const ordered_json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

SolveResult dispatch(const TreeInstance& inst, const std::string& algo) {
  if (algo == "oracle") return solve_exact_oracle(inst);
  if (algo == "greedy") return solve_greedy_degree(inst);
  if (algo == "corridor") return solve_corridor(inst);
  if (algo == "kstar") {
    auto d = recognize_kstar(inst);
    if (!d)
      throw Error(ErrorCode::PreconditionViolated, "instance is not a k-star");
    return solve_kstar(inst, *d);
  }
  if (algo == "caterpillar") {
    auto d = recognize_spine(inst);
    if (!d)
      throw Error(ErrorCode::PreconditionViolated,
                  "instance is not a k-caterpillar");
    return solve_kcaterpillar(inst, *d);
  }
  return solve_auto(inst);
}

int cmd_solve(const std::string& input, const std::string& algo,
              const std::string& objective, const std::string& output,
              const std::string& dump_network) {
  TreeInstance inst = instance_from_json(load_json_file(input));
  if (!dump_network.empty()) {
    auto d = recognize_kstar(inst);
    if (!d)
      throw Error(ErrorCode::PreconditionViolated,
                  "network dump needs a k-star instance");
    write_file_atomic(dump_network,
                      build_kstar_flow_network(inst, *d).dump());
  }
  ordered_json out;
  if (objective == "decision") {
    DecisionResult dec = solve_bsave_decision(inst);
    out["all_saved"] = dec.all_saved;
    out["algorithm_tag"] = dec.algorithm_tag;
    if (dec.witness) out["strategy"] = strategy_to_json(*dec.witness);
  } else {
    SolveResult res = dispatch(inst, algo);
    out["saved_target_weight"] = res.saved_target_weight;
    out["burned_target_weight"] = min_burned(inst, res);
    out["strategy"] = strategy_to_json(res.strategy);
    out["algorithm_tag"] = res.algorithm_tag;
  }
  write_json(output, out);
  return 0;
}

int cmd_simulate(const std::string& input, const std::string& strategy_path,
                 bool trace, const std::string& output) {
  TreeInstance inst = instance_from_json(load_json_file(input));
  Strategy strat = strategy_from_json(load_json_file(strategy_path));
  ValidityReport report = validate_strategy(inst, strat);
  if (!report.ok) {
    std::cerr << "invalid strategy: " << report.message << "\n";
    return kExitInvalidStrategy;
  }
  SimulationOutcome outcome = simulate(inst, strat);
  ordered_json out = outcome_to_json(outcome, trace);
  out["saved_target_weight"] = saved_target_weight(inst, outcome);
  write_json(output, out);
  return 0;
}

int cmd_generate(const GenSpec& spec, const std::string& inner_path,
                 const std::string& output) {
  GenSpec s = spec;
  TreeInstance inner = TreeInstance::build(1, {}, 0, {0});
  if (!inner_path.empty()) {
    inner = instance_from_json(load_json_file(inner_path));
    s.inner = &inner;
  }
  GeneratedInstance g = generate(s);
  write_json(output, instance_to_json(g.instance, g.meta));
  return 0;
}

int cmd_bench(const std::string& dir, const std::vector<std::string>& algos,
              int repeat, const std::string& json_out) {
  std::vector<fs::path> files;
  if (!dir.empty() && fs::exists(dir))
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  ordered_json rows = ordered_json::array();
  std::cout << "instance\talgo\tvalue\tms\toracle_agrees\n";
  for (const fs::path& file : files) {
    TreeInstance inst = TreeInstance::build(1, {}, 0, {0});
    try {
      inst = instance_from_json(load_json_file(file.string()));
    } catch (const std::exception& e) {
      std::cerr << file.string() << ": " << e.what() << "\n";
      continue;
    }
    std::optional<Weight> oracle_value;
    for (const std::string& algo : algos) {
      ordered_json row;
      row["instance"] = file.filename().string();
      row["algo"] = algo;
      try {
        SolveResult res;
        double ms = 0;
        for (int r = 0; r < std::max(1, repeat); ++r) {
          auto t0 = std::chrono::steady_clock::now();
          res = dispatch(inst, algo);
          auto t1 = std::chrono::steady_clock::now();
          ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        ms /= std::max(1, repeat);
        if (algo == "oracle") oracle_value = res.saved_target_weight;
        row["value"] = res.saved_target_weight;
        row["ms"] = ms;
        std::string agrees = "-";
        if (oracle_value) {
          row["oracle_agrees"] = (*oracle_value == res.saved_target_weight);
          agrees = *oracle_value == res.saved_target_weight ? "true" : "false";
        }
        std::cout << file.filename().string() << '\t' << algo << '\t'
                  << res.saved_target_weight << '\t' << ms << '\t' << agrees
                  << "\n";
      } catch (const std::exception& e) {
        row["error"] = e.what();
        std::cerr << file.string() << " [" << algo << "]: " << e.what() << "\n";
      }
      rows.push_back(std::move(row));
    }
  }
  if (!json_out.empty()) write_json(json_out, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"firefighter-on-trees solver toolkit"};
  app.require_subcommand(1);

  std::string input, output, strategy_path, algo = "auto", objective = "max";
  bool trace = false;

  CLI::App* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("--input", input)->required();
  solve->add_option("--output", output)->required();
  solve->add_option("--algo", algo)
      ->check(CLI::IsMember(
          {"oracle", "greedy", "corridor", "kstar", "caterpillar", "auto"}));
  solve->add_option("--objective", objective)
      ->check(CLI::IsMember({"max", "min", "decision"}));
  std::string dump_network;
  solve->add_option("--dump-network", dump_network,
                    "write the flow network (one 'arc tail head cap cost' "
                    "line per arc) for k-star instances");

  CLI::App* simulate = app.add_subcommand("simulate", "run a strategy");
  simulate->add_option("--input", input)->required();
  simulate->add_option("--strategy", strategy_path)->required();
  simulate->add_option("--output", output)->required();
  simulate->add_flag("--trace", trace);

  GenSpec spec;
  std::string inner_path, shape = "any";
  long long budget = 1;
  CLI::App* generate = app.add_subcommand("generate", "emit an instance file");
  generate->set_help_flag("--help", "print help");  // frees -h for --h
  generate->add_option("--family", spec.family)
      ->required()
      ->check(CLI::IsMember({"complete", "greedy-pathology", "npc-reduction",
                             "maxsave-reduction", "minsave-reduction",
                             "random"}));
  generate->add_option("--h", spec.h);
  generate->add_option("--d", spec.d);
  generate->add_option("--b", budget);
  generate->add_option("--k", spec.k);
  generate->add_option("--n", spec.n);
  generate->add_option("--epsilon", spec.epsilon);
  generate->add_option("--seed", spec.seed);
  generate->add_option("--shape", shape)
      ->check(CLI::IsMember({"any", "kstar", "kcaterpillar"}));
  generate->add_option("--input", inner_path);
  generate->add_option("--output", output)->required();

  std::string bench_dir, bench_json;
  std::vector<std::string> algos{"auto"};
  int repeat = 1;
  CLI::App* bench = app.add_subcommand("bench", "benchmark a directory");
  bench->add_option("--dir", bench_dir)->required();
  bench->add_option("--algos", algos)->delimiter(',');
  bench->add_option("--repeat", repeat);
  bench->add_option("--json", bench_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    if (*solve) return cmd_solve(input, algo, objective, output, dump_network);
    if (*simulate) return cmd_simulate(input, strategy_path, trace, output);
    if (*generate) {
      spec.b = budget;
      spec.shape = shape;
      return cmd_generate(spec, inner_path, output);
    }
    if (*bench) return cmd_bench(bench_dir, algos, repeat, bench_json);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
