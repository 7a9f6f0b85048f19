#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "credopt/bench.hpp"
#include "credopt/errors.hpp"
#include "credopt/io.hpp"
#include "credopt/model.hpp"
#include "credopt/renewals.hpp"
#include "credopt/rules.hpp"
#include "credopt/solve_dp.hpp"
#include "credopt/solve_flow.hpp"
#include "credopt/solve_structured.hpp"

namespace {

using credopt::format_number;
using nlohmann::json;

constexpr int kExitInfeasible = 2;
constexpr int kExitInvalid = 3;

// all CLI numbers go out at six significant digits
double round6(double x) { return std::stod(format_number(x)); }

json assignment_json(const credopt::Assignment& a) {
  return {{"choices", a.choices},
          {"cost", round6(a.total_cost)},
          {"credibility", round6(a.total_credibility)}};
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<credopt::Format> default_formats() {
  return {{1, 1.0, 2.0, 1.0}, {2, 1.0, 1.5, 2.2}, {3, 1.0, 1.0, 5.4}, {4, 1.0, 0.5, 13.7}};
}

struct SolveArgs {
  std::string scenario;
  std::string solver = "dp";
  double value = 0.0;  // target or budget
  double grid = 0.0;   // zeta or eta; 0 = default
  bool csv = false;
};

int run_minc(const SolveArgs& args) {
  const credopt::Scenario s = credopt::load_scenario(args.scenario);
  const credopt::CredibilityMatrix m = credopt::build_matrix(s);
  const double zeta = args.grid > 0 ? args.grid : credopt::default_grid_unit(m);
  std::optional<credopt::Assignment> a;
  if (args.solver == "dp")
    a = credopt::solve_minc_dp({m, s.formats, args.value, zeta});
  else if (args.solver == "mcf")
    a = credopt::solve_minc_mcf(m, s.formats, args.value);
  else if (args.solver == "ann")
    a = credopt::solve_minc_ann(credopt::preselect_formats(m, s.formats), args.value, zeta,
                                &s.corroboration);
  else
    throw credopt::InvariantViolation("minc solver must be dp, mcf, or ann");
  if (!a) {
    if (args.csv)
      std::cout << "feasible,cost,credibility,active\n0,,,\n";
    else
      emit({{"feasible", false}});
    return kExitInfeasible;
  }
  if (args.csv)
    std::cout << "feasible,cost,credibility,active\n1," << format_number(a->total_cost) << ','
              << format_number(a->total_credibility) << ',' << credopt::active_count(a->choices)
              << '\n';
  else {
    json j = assignment_json(*a);
    j["feasible"] = true;
    emit(j);
  }
  return 0;
}

int run_maxc(const SolveArgs& args) {
  const credopt::Scenario s = credopt::load_scenario(args.scenario);
  const credopt::CredibilityMatrix m = credopt::build_matrix(s);
  const double eta = args.grid > 0 ? args.grid : credopt::default_grid_unit(m);
  credopt::Assignment a;
  if (args.solver == "dp")
    a = credopt::solve_maxc_dp({m, s.formats, args.value, eta});
  else if (args.solver == "mcf")
    a = credopt::solve_maxc_mcf(m, s.formats, args.value);
  else if (args.solver == "ann")
    a = credopt::solve_maxc_ann(credopt::preselect_formats(m, s.formats), args.value, eta,
                                &s.corroboration);
  else if (args.solver == "two-format")
    a = credopt::solve_maxc_two_format(m, s.formats, args.value);
  else
    throw credopt::InvariantViolation("maxc solver must be dp, mcf, ann, or two-format");
  if (args.csv)
    std::cout << "feasible,cost,credibility,active\n1," << format_number(a.total_cost) << ','
              << format_number(a.total_credibility) << ',' << credopt::active_count(a.choices)
              << '\n';
  else {
    json j = assignment_json(a);
    j["feasible"] = true;
    emit(j);
  }
  return 0;
}

int run_rules(const std::string& scenario_path, const std::string& table_path) {
  const credopt::Scenario s = credopt::load_scenario(scenario_path);
  const credopt::CredibilityMatrix m = credopt::build_matrix(s);
  const credopt::RuleTableFile tf = credopt::load_rule_table(table_path);
  const credopt::PreferredProfile profile = credopt::preselect_formats(m, s.formats);
  const credopt::ReportPool pool = credopt::pool_from_profile(tf.table, profile, m.distances);
  const credopt::Verdict v = credopt::satisfy(tf.table, pool, m.distances);

  json j;
  j["credible"] = v.credible;
  j["rule_id"] = v.rule_id;
  j["cost"] = round6(v.cost);
  j["activated"] = v.activated;
  j["plan"] = json::array();
  for (const credopt::UpgradeStep& st : v.plan)
    j["plan"].push_back(
        {{"reporter", st.reporter}, {"from", st.from_format}, {"to", st.to_format}});
  j["warnings"] = tf.warnings;
  emit(j);
  return v.credible ? 0 : kExitInfeasible;
}

struct SimArgs {
  std::string scenario;
  std::string dist;
  std::string mode = "maxcs";
  double v = 1.0;
  std::int64_t frames = 1000;
  std::uint64_t seed = 1;
  bool decentralized = false;
  std::string frame_solver = "dp";
  double e_av = 0.0, c_av = 0.0, c_min = 0.0, b_max = 0.0, p_av = 0.0;
  std::string csv;
};

credopt::ControllerConfig make_config(const SimArgs& args, int reporters) {
  credopt::ControllerConfig cfg;
  cfg.v = args.v;
  cfg.decentralized = args.decentralized;
  cfg.frame_solver = args.frame_solver == "ann" ? credopt::ControllerConfig::FrameSolver::Ann
                                                : credopt::ControllerConfig::FrameSolver::Dp;
  if (args.mode == "maxcs")
    cfg.constraint = credopt::MaxCSConstraint{args.e_av, args.c_min};
  else if (args.mode == "mincs")
    cfg.constraint = credopt::MinCSConstraint{args.c_av};
  else if (args.mode == "power")
    cfg.constraint = credopt::PowerAwareConstraint{
        std::vector<double>(static_cast<size_t>(reporters), args.p_av), args.c_min, args.b_max};
  else
    throw credopt::InvariantViolation("mode must be maxcs, mincs, or power");
  return cfg;
}

void write_trace_csv(const credopt::FrameTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw credopt::ParseError("cannot write " + path);
  const size_t queues = trace.final_z.size();
  out << "k,cost,credibility";
  for (size_t mq = 1; mq <= queues; ++mq) out << ",z" << mq;
  out << ",running_avg_cost,running_avg_cred\n";
  for (const credopt::FrameRecord& rec : trace.frames) {
    out << rec.k << ',' << format_number(rec.cost) << ',' << format_number(rec.credibility);
    for (double zv : rec.z) out << ',' << format_number(zv);
    out << ',' << format_number(rec.running_avg_cost) << ','
        << format_number(rec.running_avg_cred) << '\n';
  }
}

json trace_summary(const credopt::FrameTrace& trace, std::int64_t frames) {
  json j;
  j["frames"] = frames;
  j["avg_cost"] = round6(trace.avg_cost);
  j["avg_cred"] = round6(trace.avg_cred);
  j["last_quarter_avg_cost"] = round6(trace.last_quarter_avg_cost);
  j["last_quarter_avg_cred"] = round6(trace.last_quarter_avg_cred);
  j["max_z1"] = round6(trace.max_z1);
  json fz = json::array();
  for (double zv : trace.final_z) fz.push_back(round6(zv));
  j["final_z"] = fz;
  json ya = json::array();
  for (double ys : trace.y_sum) ya.push_back(round6(ys / static_cast<double>(frames)));
  j["avg_y"] = ya;
  return j;
}

credopt::EventDistribution sim_distribution(const SimArgs& args) {
  if (!args.dist.empty()) return credopt::load_distribution(args.dist);
  if (args.scenario.empty())
    throw credopt::InvariantViolation("simulate needs --scenario or --dist");
  return credopt::EventDistribution{credopt::EventDistribution::Kind::Deterministic,
                                    credopt::load_scenario(args.scenario),
                                    {}, 0.5, 0.0, 0.9, 0.9, false};
}

int run_simulate(const SimArgs& args) {
  credopt::EventDistribution dist = sim_distribution(args);
  const int reporters = static_cast<int>(dist.base.reporters.size());
  const credopt::ControllerConfig cfg = make_config(args, reporters);
  credopt::EventGenerator gen(std::move(dist), args.seed);
  const credopt::FrameTrace trace = credopt::run(cfg, gen, args.frames);
  if (!args.csv.empty()) write_trace_csv(trace, args.csv);
  emit(trace_summary(trace, args.frames));
  return 0;
}

int run_sweep(const SimArgs& args, const std::vector<double>& v_grid) {
  credopt::EventDistribution dist = sim_distribution(args);
  const int reporters = static_cast<int>(dist.base.reporters.size());
  std::cout << "v,avg_cost,avg_cred,last_quarter_avg_cost,last_quarter_avg_cred,max_z1\n";
  for (double v : v_grid) {
    SimArgs a = args;
    a.v = v;
    const credopt::ControllerConfig cfg = make_config(a, reporters);
    credopt::EventGenerator gen(dist, args.seed);  // common seed across the grid
    const credopt::FrameTrace trace = credopt::run(cfg, gen, args.frames);
    std::cout << format_number(v) << ',' << format_number(trace.avg_cost) << ','
              << format_number(trace.avg_cred) << ','
              << format_number(trace.last_quarter_avg_cost) << ','
              << format_number(trace.last_quarter_avg_cred) << ','
              << format_number(trace.max_z1) << '\n';
  }
  return 0;
}

struct BenchArgs {
  std::string scenario;
  int instances = 50;
  std::vector<int> k_grid;
  int near_count = 92, far_count = 8;
  double near_lo = 4.2, near_hi = 4.84, far_lo = 6.6, far_hi = 7.4;
  int reps = 1;
  std::uint64_t seed = 7;
  std::vector<std::string> solvers = {"dp", "ann"};
  std::string csv;
  bool summary_json = false;
};

int run_bench_gap(const BenchArgs& args) {
  credopt::BenchSpec spec;
  spec.formats = default_formats();
  spec.instances = args.instances;
  spec.repetitions = args.reps;
  spec.seed = args.seed;
  spec.solvers = args.solvers;
  spec.k_grid = args.k_grid;
  if (spec.k_grid.empty()) spec.k_grid = {1, 2, 3, 4, 5, 6, 7};
  if (!args.scenario.empty()) {
    spec.scenario_file = args.scenario;
    spec.label = args.scenario;
  } else {
    spec.rings = {{args.near_count, args.near_lo, args.near_hi},
                  {args.far_count, args.far_lo, args.far_hi}};
  }
  const credopt::BenchReport report = credopt::run_bench(spec);
  const std::string csv = credopt::bench_csv(report.rows);
  if (!args.csv.empty()) {
    std::ofstream out(args.csv);
    if (!out) throw credopt::ParseError("cannot write " + args.csv);
    out << csv;
  } else if (!args.summary_json) {
    std::cout << csv;
  }
  if (args.summary_json)
    emit({{"mean_gap", round6(report.mean_gap)},
          {"max_gap", round6(report.max_gap)},
          {"median_runtime_ratio", round6(report.median_runtime_ratio)},
          {"compared_cells", report.compared_cells}});
  return 0;
}

struct GenArgs {
  int n = 100;
  double r_lo = 0.0, r_hi = 10.0, h0 = 1.0;
  std::uint64_t seed = 1;
  std::string out;
};

int run_gen(const GenArgs& args) {
  credopt::RandomScenarioSpec spec{args.n, default_formats(), args.r_lo, args.r_hi, args.h0};
  const credopt::Scenario s = credopt::random_scenario(spec, args.seed);
  if (args.out.empty())
    emit(credopt::scenario_to_json(s));
  else
    credopt::save_scenario(s, args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corroboration-pull optimization toolkit"};
  app.require_subcommand(1);

  SolveArgs minc_args;
  CLI::App* minc = app.add_subcommand("minc", "minimum-cost selection meeting a credibility target");
  minc->add_option("--scenario", minc_args.scenario)->required();
  minc->add_option("--target", minc_args.value)->required();
  minc->add_option("--zeta", minc_args.grid);
  minc->add_option("--solver", minc_args.solver)->check(CLI::IsMember({"dp", "mcf", "ann"}));
  minc->add_flag("--csv", minc_args.csv);

  SolveArgs maxc_args;
  CLI::App* maxc = app.add_subcommand("maxc", "maximum-credibility selection under a budget");
  maxc->add_option("--scenario", maxc_args.scenario)->required();
  maxc->add_option("--budget", maxc_args.value)->required();
  maxc->add_option("--eta", maxc_args.grid);
  maxc->add_option("--solver", maxc_args.solver)
      ->check(CLI::IsMember({"dp", "mcf", "ann", "two-format"}));
  maxc->add_flag("--csv", maxc_args.csv);

  std::string rules_scenario, rules_table;
  CLI::App* rules = app.add_subcommand("rules", "rule-table credibility verdict");
  rules->add_option("--scenario", rules_scenario)->required();
  rules->add_option("--table", rules_table)->required();

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "frame-based drift-plus-penalty simulation");
  sim->add_option("--scenario", sim_args.scenario);
  sim->add_option("--dist", sim_args.dist);
  sim->add_option("--mode", sim_args.mode)->check(CLI::IsMember({"maxcs", "mincs", "power"}));
  sim->add_option("--v", sim_args.v);
  sim->add_option("--frames", sim_args.frames);
  sim->add_option("--seed", sim_args.seed);
  sim->add_flag("--decentralized", sim_args.decentralized);
  sim->add_option("--frame-solver", sim_args.frame_solver)->check(CLI::IsMember({"dp", "ann"}));
  sim->add_option("--e-av", sim_args.e_av);
  sim->add_option("--c-av", sim_args.c_av);
  sim->add_option("--c-min", sim_args.c_min);
  sim->add_option("--b-max", sim_args.b_max);
  sim->add_option("--p-av", sim_args.p_av);
  sim->add_option("--csv", sim_args.csv);

  SimArgs sweep_args;
  std::vector<double> v_grid = {1, 5, 25, 125};
  CLI::App* sweep = app.add_subcommand("sweep", "V-grid tradeoff sweep of the simulator");
  sweep->add_option("--scenario", sweep_args.scenario);
  sweep->add_option("--dist", sweep_args.dist);
  sweep->add_option("--mode", sweep_args.mode)->check(CLI::IsMember({"maxcs", "mincs", "power"}));
  sweep->add_option("--v-grid", v_grid);
  sweep->add_option("--frames", sweep_args.frames);
  sweep->add_option("--seed", sweep_args.seed);
  sweep->add_option("--frame-solver", sweep_args.frame_solver)
      ->check(CLI::IsMember({"dp", "ann"}));
  sweep->add_option("--e-av", sweep_args.e_av);
  sweep->add_option("--c-av", sweep_args.c_av);
  sweep->add_option("--c-min", sweep_args.c_min);
  sweep->add_option("--b-max", sweep_args.b_max);
  sweep->add_option("--p-av", sweep_args.p_av);

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "benchmark harness");
  CLI::App* gap = bench->add_subcommand("gap", "cost-minimization gap and runtime study");
  gap->add_option("--scenario", bench_args.scenario);
  gap->add_option("--instances", bench_args.instances);
  gap->add_option("--k-grid", bench_args.k_grid);
  gap->add_option("--near-count", bench_args.near_count);
  gap->add_option("--near-lo", bench_args.near_lo);
  gap->add_option("--near-hi", bench_args.near_hi);
  gap->add_option("--far-count", bench_args.far_count);
  gap->add_option("--far-lo", bench_args.far_lo);
  gap->add_option("--far-hi", bench_args.far_hi);
  gap->add_option("--reps", bench_args.reps);
  gap->add_option("--seed", bench_args.seed);
  gap->add_option("--solvers", bench_args.solvers);
  gap->add_option("--csv", bench_args.csv);
  gap->add_flag("--json", bench_args.summary_json);
  bench->require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-scenario", "write a random scenario file");
  gen->add_option("--n", gen_args.n);
  gen->add_option("--r-lo", gen_args.r_lo);
  gen->add_option("--r-hi", gen_args.r_hi);
  gen->add_option("--h0", gen_args.h0);
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--out", gen_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    if (minc->parsed()) return run_minc(minc_args);
    if (maxc->parsed()) return run_maxc(maxc_args);
    if (rules->parsed()) return run_rules(rules_scenario, rules_table);
    if (sim->parsed()) return run_simulate(sim_args);
    if (sweep->parsed()) return run_sweep(sweep_args, v_grid);
    if (bench->parsed()) return run_bench_gap(bench_args);
    if (gen->parsed()) return run_gen(gen_args);
  } catch (const credopt::InfeasibleFrame& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
