// Command-line front end: stationary scheduling, online replay, adversarial
// generators, traffic generation, the simulation study, and the exact
// oracle. Exit codes: 0 success, 1 validation failure, 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lighttrail/adversary.hpp"
#include "lighttrail/experiment.hpp"
#include "lighttrail/io.hpp"
#include "lighttrail/online.hpp"
#include "lighttrail/oracle.hpp"
#include "lighttrail/stationary.hpp"
#include "lighttrail/traffic.hpp"

using namespace lighttrail;

namespace {

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file(out_path, content);
  }
}

int max_node(const EventSequence& events) {
  int n = 0;
  for (const auto& ev : events)
    if (ev.kind == Event::Kind::kArrive)
      n = std::max({n, ev.src, ev.dst});
  return n;
}

std::string stage_sidecar(const std::vector<StageRecord>& stages) {
  std::ostringstream out;
  for (const auto& s : stages) {
    out << "stage," << s.stage << ",kept";
    for (int id : s.kept) out << ' ' << id;
    out << ",departed";
    for (int id : s.departed) out << ' ' << id;
    out << "\n";
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"light-trail scheduling toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string mode_name = "nonsplittable";
  std::uint64_t seed = 1;
  std::string out_path;
  app.add_option("--mode", mode_name, "splittable|nonsplittable")
      ->check(CLI::IsMember({"splittable", "nonsplittable"}));
  app.add_option("--seed", seed, "base random seed");
  app.add_option("--out", out_path, "output file (stdout when absent)");

  // stationary <instance-file>
  auto* stationary = app.add_subcommand("stationary", "schedule an instance");
  std::string instance_path;
  stationary->add_option("instance", instance_path, "instance file")->required();

  // online <trace-file> --policy ... --topology ...
  auto* online = app.add_subcommand("online", "replay an event trace");
  std::string trace_path, policy_name_arg = "separate", topology_name = "array";
  int online_n = 0;
  std::string audit_path;
  online->add_option("trace", trace_path, "event trace file")->required();
  online->add_option("--policy", policy_name_arg, "separate|all|baseline")
      ->check(CLI::IsMember({"separate", "all", "baseline"}));
  online->add_option("--topology", topology_name, "array|ring")
      ->check(CLI::IsMember({"array", "ring"}));
  online->add_option("-n,--nodes", online_n, "node count (derived when absent)");
  online->add_option("--audit", audit_path, "write the assignment trace here");

  // adversary {hierarchical|ladder|killer|adaptive}
  auto* adversary = app.add_subcommand("adversary", "lower-bound constructions");
  adversary->require_subcommand(1);
  auto* hier = adversary->add_subcommand("hierarchical", "dense instance");
  int hier_n = 16, extra_c = 0;
  hier->add_option("-n,--scale", hier_n, "2^k links");
  hier->add_option("--extra-c", extra_c, "extra full-span unit transmissions");
  auto* ladder = adversary->add_subcommand("ladder", "nested class sequence");
  int ladder_k = 4;
  ladder->add_option("-k", ladder_k, "number of doublings");
  auto* killer = adversary->add_subcommand("killer", "pattern sequence");
  int killer_n = 16;
  killer->add_option("-n,--scale", killer_n, "2^k links");
  auto* adaptive = adversary->add_subcommand("adaptive", "adaptive adversary");
  int adaptive_n = 16;
  std::string adaptive_policy = "separate", stages_path;
  adaptive->add_option("-n,--scale", adaptive_n, "2^k links");
  adaptive->add_option("--policy", adaptive_policy, "separate|all|baseline")
      ->check(CLI::IsMember({"separate", "all", "baseline"}));
  adaptive->add_option("--stages", stages_path, "write stage records here");

  // traffic
  auto* traffic = app.add_subcommand("traffic", "generate a workload trace");
  int traffic_n = 16;
  LoadParams load;
  std::string dest_name = "uniform";
  traffic->add_option("-n,--nodes", traffic_n, "ring size");
  traffic->add_option("--lambda", load.lambda, "duration Poisson parameter");
  traffic->add_option("--dest", dest_name,
                      "uniform|uniformclass|bimodal|shortpreferred")
      ->check(CLI::IsMember(
          {"uniform", "uniformclass", "bimodal", "shortpreferred"}));
  traffic->add_option("--rmin", load.r_min, "minimum bandwidth fraction");
  traffic->add_option("--alpha", load.alpha, "Pareto shape");
  traffic->add_option("--horizon", load.horizon, "time steps");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run the simulation study");
  ExperimentConfig config;
  std::string summary_path;
  bool full_grid = false;
  simulate->add_flag("--grid", full_grid, "full study grid (n=5..20, 150 reps)");
  simulate->add_option("--n-min", config.n_min, "smallest ring");
  simulate->add_option("--n-max", config.n_max, "largest ring");
  simulate->add_option("--reps", config.repetitions, "repetitions per cell");
  simulate->add_option("--steps", config.horizon, "time steps per run");
  simulate->add_option("--alpha", config.alpha, "Pareto shape");
  simulate->add_option("--lambda", config.lambda, "duration parameter");
  simulate->add_option("--threads", config.threads, "worker threads");
  simulate->add_option("--summary", summary_path, "aggregate CSV path");

  // oracle <instance-file>
  auto* oracle = app.add_subcommand("oracle", "exact minimum wavelengths");
  std::string oracle_path;
  int oracle_limit = 16;
  oracle->add_option("instance", oracle_path, "instance file")->required();
  oracle->add_option("--max-wavelengths", oracle_limit, "search bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Mode mode = mode_name == "splittable" ? Mode::kSplittable
                                        : Mode::kNonSplittable;
  try {
    if (*stationary) {
      Instance inst = load_instance(instance_path);
      Schedule schedule =
          schedule_stationary(inst.transmissions, inst.node_count, mode);
      Bandwidth c = inst.transmissions.empty()
                        ? 0
                        : link_congestion(inst.transmissions, inst.node_count)
                              .max_link;
      emit(out_path, format_schedule(schedule, c));
      if (!validate_schedule(inst.transmissions, schedule, mode).ok()) {
        std::cerr << "schedule failed validation\n";
        return 1;
      }
      return 0;
    }

    if (*online) {
      EventSequence events = load_trace(trace_path);
      int n = online_n > 0 ? online_n : max_node(events) + 1;
      Topology topo =
          topology_name == "ring" ? Topology::kRing : Topology::kArray;
      OnlineResult result = run_online(events, parse_policy(policy_name_arg),
                                       topo, n);
      emit(out_path, format_online_result(result) + "\n");
      if (!audit_path.empty()) {
        std::ostringstream audit;
        for (const auto& [id, p] : result.assignments)
          audit << id << ' ' << p.fiber << ' ' << p.wavelength << ' '
                << p.trail_extent.lo << ' ' << p.trail_extent.hi << "\n";
        write_file(audit_path, audit.str());
      }
      return 0;
    }

    if (*hier) {
      auto ts = make_hierarchical_instance(hier_n, extra_c);
      emit(out_path, format_instance({hier_n + 1, ts}));
      return 0;
    }
    if (*ladder) {
      emit(out_path, format_trace(make_class_ladder(ladder_k)));
      return 0;
    }
    if (*killer) {
      KillerSequence seq = make_killer_sequence(killer_n);
      emit(out_path, format_trace(seq.events));
      return 0;
    }
    if (*adaptive) {
      AdversaryOutcome out =
          run_adaptive_adversary(parse_policy(adaptive_policy), adaptive_n);
      OptStagePlan plan = build_opt_stage_plan(out.stages, out.events, adaptive_n);
      emit(out_path, format_trace(out.events));
      if (!stages_path.empty()) write_file(stages_path, stage_sidecar(out.stages));
      std::cerr << "alg_final=" << out.alg_final_wavelengths
                << " opt_peak=" << plan.peak_wavelengths << "\n";
      for (std::size_t i = 0; i < plan.stage_schedules.size(); ++i) {
        if (!validate_schedule(plan.stage_active[i], plan.stage_schedules[i],
                               Mode::kNonSplittable)
                 .ok()) {
          std::cerr << "reference schedule failed validation at stage " << i
                    << "\n";
          return 1;
        }
      }
      return 0;
    }

    if (*traffic) {
      load.seed = seed;
      load.dest = parse_dest_distribution(dest_name);
      emit(out_path, format_trace(generate_workload(traffic_n, load)));
      return 0;
    }

    if (*simulate) {
      if (full_grid) {
        config.n_min = 5;
        config.n_max = 20;
        config.repetitions = 150;
        config.horizon = 100;
      }
      config.seed = seed;
      auto rows = run_experiment(config);
      emit(out_path, format_rows_csv(rows));
      if (!summary_path.empty())
        write_file(summary_path, format_summary_csv(aggregate(rows)));
      return 0;
    }

    if (*oracle) {
      Instance inst = load_instance(oracle_path);
      OracleResult r = brute_force_min_wavelengths(inst.transmissions,
                                                   inst.node_count, oracle_limit);
      std::ostringstream text;
      text << "minimum_wavelengths=" << r.wavelengths << "\n"
           << format_schedule(r.witness,
                              inst.transmissions.empty()
                                  ? 0
                                  : link_congestion(inst.transmissions,
                                                    inst.node_count)
                                        .max_link);
      emit(out_path, text.str());
      if (!validate_schedule(inst.transmissions, r.witness,
                             Mode::kNonSplittable)
               .ok()) {
        std::cerr << "oracle witness failed validation\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
