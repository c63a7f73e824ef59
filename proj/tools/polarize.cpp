// polarize: generate, solve, evaluate, and benchmark instances of the
// bipartite polarization problem on user debate graphs.
//
// Exit codes: 0 success, 1 usage error, 2 invalid input or configuration,
// 3 benchmark finished but some exact solves hit the time budget.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polarize/polarize.hpp"

namespace {

void write_text(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw polarize::ValidationError("cannot open for writing: " + path);
  out << content;
}

nlohmann::ordered_json stats_json(const polarize::SolveResult& res,
                                  const std::string& method, std::uint64_t seed) {
  nlohmann::ordered_json st;
  if (method == "ls") {
    st["steps"] = res.stats.steps;
    st["restarts"] = res.stats.restarts;
    st["step_cap_hit"] = res.stats.step_cap_hit;
    st["seed"] = seed;
  } else {
    st["search_nodes"] = res.stats.search_nodes;
  }
  st["time_ms"] = res.stats.time_ms;
  st["optimal"] = res.stats.optimal;
  if (method == "bnb") st["timeout"] = res.stats.timeout;
  return st;
}

int run_gen(int m, double alpha, std::uint64_t seed, const std::string& out_path) {
  polarize::UDebG g = polarize::generate({m, alpha, seed});
  nlohmann::ordered_json j = polarize::instance_to_json(g);
  j["meta"] = {{"m", m}, {"alpha", alpha}, {"seed", seed}};
  write_text(out_path, polarize::canonical_dump(j));
  return 0;
}

int run_solve(const std::string& method, std::uint64_t seed,
              const std::string& instance_path) {
  polarize::UDebG g = polarize::load_instance(instance_path);
  polarize::SolveResult res;
  if (method == "exhaustive")
    res = polarize::solve_exhaustive(g);
  else if (method == "bnb")
    res = polarize::solve_bnb(g);
  else
    res = polarize::solve_ls(g, seed);

  nlohmann::ordered_json j;
  j["method"] = method;
  j["bippol"] = res.bippol;
  j["assignment"] = polarize::assignment_to_json(res.assignment);
  j["stats"] = stats_json(res, method, seed);
  std::cout << polarize::canonical_dump(j);
  return 0;
}

int run_eval(const std::string& instance_path, const std::string& assignment_path) {
  polarize::UDebG g = polarize::load_instance(instance_path);
  polarize::Bipartition p = polarize::load_assignment(assignment_path, g.size());
  polarize::PolarizationBreakdown b = polarize::evaluate(g, p);
  nlohmann::ordered_json j = {{"lc", b.lc},
                              {"rc", b.rc},
                              {"sc", b.sc},
                              {"sweight", b.sweight},
                              {"bippol", b.bippol}};
  std::cout << polarize::canonical_dump(j);
  return 0;
}

int run_debate(const std::string& in_path, const std::string& out_path) {
  polarize::DebateTree tree = polarize::propagate_sides(polarize::load_debate(in_path));
  polarize::UDebG g = polarize::aggregate(tree);
  write_text(out_path, polarize::canonical_dump(polarize::instance_to_json(g)));
  return 0;
}

int run_reduce(const std::string& in_path, const std::string& out_path) {
  polarize::UDebG g = polarize::reduce(polarize::load_maxcut(in_path));
  write_text(out_path, polarize::canonical_dump(polarize::instance_to_json(g)));
  return 0;
}

int run_maxcut(const std::string& in_path) {
  polarize::MaxcutGraph gc = polarize::load_maxcut(in_path);
  polarize::MaxcutResult res = polarize::maxcut_bruteforce(gc);
  nlohmann::ordered_json j;
  j["cut"] = res.cut;
  j["side"] = nlohmann::ordered_json::array();
  for (std::int8_t s : res.side) j["side"].push_back(static_cast<int>(s));
  std::cout << polarize::canonical_dump(j);
  return 0;
}

int run_bench(const polarize::BenchGrid& grid, const polarize::BenchOptions& opts,
              const std::string& out_path, const std::string& plot_path) {
  std::vector<polarize::ExperimentRecord> records = polarize::run_matrix(grid, opts);

  std::ostringstream csv;
  polarize::emit_csv(records, csv);
  write_text(out_path, csv.str());

  std::vector<polarize::CellSummary> summary = polarize::summarize(records);
  if (!plot_path.empty()) {
    std::ostringstream svg;
    polarize::emit_plot(summary, svg);
    write_text(plot_path, svg.str());
  }

  int timeouts = 0;
  for (const auto& c : summary) {
    std::cerr << "alpha=" << c.alpha << " m=" << c.m << " solver=" << c.solver
              << " n=" << c.count << " median_bippol=" << c.bippol.median;
    if (c.solver == "bnb")
      std::cerr << " median_nodes=" << c.search_nodes.median;
    if (c.has_ratio) std::cerr << " median_ls_ratio=" << c.ls_ratio.median;
    if (c.timeouts) std::cerr << " timeouts=" << c.timeouts;
    std::cerr << "\n";
    timeouts += c.timeouts;
  }
  return timeouts > 0 ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bipartite polarization toolkit: instance generation, exact and "
               "approximate solvers, and benchmark grids"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  int gen_m = 0;
  double gen_alpha = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--m", gen_m, "node count (>= 2)")->required();
  gen->add_option("--alpha", gen_alpha, "polarization control in (0,1]")->required();
  gen->add_option("--seed", gen_seed, "RNG seed (echoed in the output meta)")
      ->default_val(0);
  gen->add_option("-o,--out", gen_out, "output instance JSON ('-' for stdout)")
      ->required();

  // solve
  auto* solve = app.add_subcommand("solve", "maximize polarization on an instance");
  std::string solve_method, solve_instance;
  std::uint64_t solve_seed = 0;
  solve->add_option("--method", solve_method, "exhaustive | bnb | ls")
      ->required()
      ->check(CLI::IsMember({"exhaustive", "bnb", "ls"}));
  solve->add_option("--seed", solve_seed, "seed for the ls method")->default_val(0);
  solve->add_option("instance", solve_instance, "instance JSON path")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate one assignment on an instance");
  std::string eval_instance, eval_assignment;
  eval->add_option("instance", eval_instance, "instance JSON path")->required();
  eval->add_option("assignment", eval_assignment,
                   "JSON array of \"L\"/\"R\" tags in node order")
      ->required();

  // debate
  auto* debate = app.add_subcommand(
      "debate", "aggregate a debate tree into an instance (sides propagated)");
  std::string debate_in, debate_out;
  debate->add_option("--in", debate_in, "debate tree JSON path")->required();
  debate->add_option("-o,--out", debate_out, "output instance JSON ('-' for stdout)")
      ->required();

  // reduce
  auto* reduce = app.add_subcommand("reduce", "embed a maxcut instance");
  std::string reduce_in, reduce_out;
  reduce->add_option("--in", reduce_in, "maxcut text file: 'n m' then 'u v' lines")
      ->required();
  reduce->add_option("-o,--out", reduce_out, "output instance JSON ('-' for stdout)")
      ->required();

  // maxcut
  auto* maxcut = app.add_subcommand("maxcut", "brute-force maxcut oracle (n <= 20)");
  std::string maxcut_in;
  maxcut->add_option("--in", maxcut_in, "maxcut text file: 'n m' then 'u v' lines")
      ->required();

  // bench
  auto* bench = app.add_subcommand("bench", "run the (alpha x m) experiment grid");
  polarize::BenchGrid grid;
  grid.alphas = {0.05, 0.08, 0.11, 0.14, 0.4, 0.7, 1.0};
  grid.sizes = {25, 30, 35, 40};
  grid.replicates = 50;
  polarize::BenchOptions bopts;
  double bench_timeout_s = 60.0;
  std::string bench_out, bench_plot;
  bench->add_option("--alphas", grid.alphas, "comma-separated alpha values")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--sizes", grid.sizes, "comma-separated node counts")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--reps", grid.replicates, "replicates per cell")
      ->capture_default_str();
  bench->add_option("--seed", grid.seed, "grid seed; cell seeds derive from it")
      ->default_val(0);
  bench->add_option("--solvers", bopts.solvers, "solvers to run (bnb, ls)")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--timeout-s", bench_timeout_s, "per-exact-solve budget, seconds")
      ->capture_default_str();
  bench->add_option("--threads", bopts.threads, "worker threads (0 = auto)")
      ->default_val(0);
  bench->add_option("--out", bench_out, "output CSV path ('-' for stdout)")->required();
  bench->add_option("--plot", bench_plot, "optional SVG plot path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen) return run_gen(gen_m, gen_alpha, gen_seed, gen_out);
    if (*solve) return run_solve(solve_method, solve_seed, solve_instance);
    if (*eval) return run_eval(eval_instance, eval_assignment);
    if (*debate) return run_debate(debate_in, debate_out);
    if (*reduce) return run_reduce(reduce_in, reduce_out);
    if (*maxcut) return run_maxcut(maxcut_in);
    if (*bench) {
      bopts.timeout_ms = static_cast<std::int64_t>(bench_timeout_s * 1000.0);
      return run_bench(grid, bopts, bench_out, bench_plot);
    }
  } catch (const polarize::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
