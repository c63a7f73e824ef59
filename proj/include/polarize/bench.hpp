#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "polarize/errors.hpp"
#include "polarize/generator.hpp"
#include "polarize/rng.hpp"
#include "polarize/solvers.hpp"

namespace polarize {

/// One benchmark row: a single solver run on a single generated instance.
struct ExperimentRecord {
  double alpha = 0.0;
  int m = 0;
  int rep = 0;
  std::uint64_t seed = 0;  // instance seed; regenerates this exact instance
  std::string solver;
  double bippol = 0.0;
  std::optional<double> ls_ratio;  // ls rows with a completed exact reference
  std::int64_t time_ms = 0;
  long long search_nodes = 0;  // b&b expansions, or ls improving steps
  bool timeout = false;
};

struct BenchGrid {
  std::vector<double> alphas;
  std::vector<int> sizes;
  int replicates = 1;
  std::uint64_t seed = 0;
};

struct BenchOptions {
  std::vector<std::string> solvers{"bnb", "ls"};
  std::int64_t timeout_ms = 60'000;  // per exact solve
  int threads = 0;                   // 0: hardware concurrency
};

/// Instance seed for one grid cell; exposed so any CSV row can be reproduced
/// by hand: generate({m, alpha, cell_seed(grid_seed, ai, mi, rep)}).
inline std::uint64_t cell_seed(std::uint64_t grid_seed, std::size_t alpha_idx,
                               std::size_t size_idx, int rep) {
  return derive_seed(grid_seed, alpha_idx, size_idx, static_cast<std::uint64_t>(rep));
}

/// Runs the (alpha x m x replicate) grid with each requested solver.
/// Replicates are solved concurrently, but every record lands in a
/// preassigned slot, so the output is identical for any thread count:
/// rows ordered by (alpha index, size index, replicate, solver index).
/// Exact solves that exceed the time budget are kept as timeout rows, and
/// their ls rows carry no ratio.
inline std::vector<ExperimentRecord> run_matrix(const BenchGrid& grid,
                                                const BenchOptions& opts = {}) {
  if (grid.alphas.empty() || grid.sizes.empty())
    throw ConfigError("benchmark grid needs at least one alpha and one size");
  if (grid.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (opts.timeout_ms <= 0) throw ConfigError("per-solve time budget must be positive");
  if (opts.solvers.empty()) throw ConfigError("no solvers requested");
  for (const std::string& s : opts.solvers)
    if (s != "bnb" && s != "ls")
      throw ConfigError("unknown solver '" + s + "' (expected bnb or ls)");

  struct Task {
    std::size_t ai, mi;
    int rep;
  };
  std::vector<Task> tasks;
  tasks.reserve(grid.alphas.size() * grid.sizes.size() *
                static_cast<size_t>(grid.replicates));
  for (std::size_t ai = 0; ai < grid.alphas.size(); ++ai)
    for (std::size_t mi = 0; mi < grid.sizes.size(); ++mi)
      for (int rep = 0; rep < grid.replicates; ++rep) tasks.push_back({ai, mi, rep});

  const std::size_t per_task = opts.solvers.size();
  std::vector<ExperimentRecord> records(tasks.size() * per_task);

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        const Task& task = tasks[t];
        const double alpha = grid.alphas[task.ai];
        const int m = grid.sizes[task.mi];
        const std::uint64_t seed = cell_seed(grid.seed, task.ai, task.mi, task.rep);
        const UDebG g = generate({m, alpha, seed});

        std::optional<double> exact;
        std::vector<SolveResult> results(per_task);
        for (std::size_t si = 0; si < per_task; ++si) {
          if (opts.solvers[si] == "bnb") {
            BnbOptions bo;
            bo.timeout_ms = opts.timeout_ms;
            results[si] = solve_bnb(g, bo);
            if (results[si].stats.optimal) exact = results[si].bippol;
          } else {
            results[si] = solve_ls(g, derive_seed(seed, kStreamBenchLs));
          }
        }

        for (std::size_t si = 0; si < per_task; ++si) {
          ExperimentRecord& r = records[t * per_task + si];
          const SolveResult& res = results[si];
          r.alpha = alpha;
          r.m = m;
          r.rep = task.rep;
          r.seed = seed;
          r.solver = opts.solvers[si];
          r.bippol = res.bippol;
          r.time_ms = res.stats.time_ms;
          r.timeout = res.stats.timeout;
          if (r.solver == "bnb") {
            r.search_nodes = res.stats.search_nodes;
          } else {
            r.search_nodes = res.stats.steps;
            if (exact) r.ls_ratio = *exact == 0.0 ? 1.0 : res.bippol / *exact;
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  unsigned n_threads = opts.threads > 0
                           ? static_cast<unsigned>(opts.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(
      std::min<std::size_t>(n_threads, tasks.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

struct SummaryStat {
  double min = 0.0, median = 0.0, max = 0.0;
};

struct CellSummary {
  double alpha = 0.0;
  int m = 0;
  std::string solver;
  int count = 0;
  int timeouts = 0;
  SummaryStat bippol, time_ms, search_nodes;
  SummaryStat ls_ratio;  // meaningful only when has_ratio
  bool has_ratio = false;
};

namespace detail {

// Median convention throughout: the lower middle element of the sorted
// values when the count is even.
inline SummaryStat stat_of(std::vector<double> vals) {
  std::sort(vals.begin(), vals.end());
  SummaryStat s;
  s.min = vals.front();
  s.max = vals.back();
  s.median = vals[(vals.size() - 1) / 2];
  return s;
}

}  // namespace detail

/// Per-(alpha, m, solver) min/median/max over the records, sorted by key.
inline std::vector<CellSummary> summarize(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw ValidationError("cannot summarize an empty record set");
  std::map<std::tuple<double, int, std::string>, std::vector<const ExperimentRecord*>>
      cells;
  for (const ExperimentRecord& r : records)
    cells[{r.alpha, r.m, r.solver}].push_back(&r);

  std::vector<CellSummary> out;
  out.reserve(cells.size());
  for (const auto& [key, rows] : cells) {
    CellSummary c;
    c.alpha = std::get<0>(key);
    c.m = std::get<1>(key);
    c.solver = std::get<2>(key);
    c.count = static_cast<int>(rows.size());
    std::vector<double> bippol, time_ms, nodes, ratio;
    for (const ExperimentRecord* r : rows) {
      bippol.push_back(r->bippol);
      time_ms.push_back(static_cast<double>(r->time_ms));
      nodes.push_back(static_cast<double>(r->search_nodes));
      if (r->ls_ratio) ratio.push_back(*r->ls_ratio);
      c.timeouts += r->timeout;
    }
    c.bippol = detail::stat_of(std::move(bippol));
    c.time_ms = detail::stat_of(std::move(time_ms));
    c.search_nodes = detail::stat_of(std::move(nodes));
    if (!ratio.empty()) {
      c.ls_ratio = detail::stat_of(std::move(ratio));
      c.has_ratio = true;
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace detail {

inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "alpha,m,rep,seed,solver,bippol,ls_ratio,time_ms,search_nodes,timeout";

/// CSV rows in record order; doubles as shortest round-trip decimals,
/// ls_ratio empty where not applicable, timeout as 0/1.
inline void emit_csv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  std::string buf = kCsvHeader;
  buf += '\n';
  for (const ExperimentRecord& r : records) {
    detail::append_double(buf, r.alpha);
    buf += ',';
    buf += std::to_string(r.m);
    buf += ',';
    buf += std::to_string(r.rep);
    buf += ',';
    buf += std::to_string(r.seed);
    buf += ',';
    buf += r.solver;
    buf += ',';
    detail::append_double(buf, r.bippol);
    buf += ',';
    if (r.ls_ratio) detail::append_double(buf, *r.ls_ratio);
    buf += ',';
    buf += std::to_string(r.time_ms);
    buf += ',';
    buf += std::to_string(r.search_nodes);
    buf += ',';
    buf += r.timeout ? '1' : '0';
    buf += '\n';
  }
  out << buf;
}

inline void emit_csv(const std::vector<ExperimentRecord>& records,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  emit_csv(records, out);
}

namespace detail {

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string fmt_tick(double v) {
  char buf[32];
  if (v >= 1.0 && v == std::floor(v) && v < 1e7)
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  else
    std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (alpha, value)
};

// One panel: value vs alpha with log10 y. Values at or below zero are drawn
// at the axis floor (medians of 0 ms are common on fast cells).
inline void plot_panel(std::string& svg, double x0, double y0, double w, double h,
                       const std::string& title,
                       const std::vector<PlotSeries>& series) {
  static constexpr const char* kPalette[] = {"#1f6fb2", "#d1495b", "#3c8d53",
                                             "#8c5fa8", "#c97b2d", "#4f4f4f",
                                             "#2aa198", "#9c6644"};
  constexpr double kFloor = 0.1;

  double amin = 1e300, amax = -1e300, vmax = kFloor;
  for (const PlotSeries& s : series)
    for (auto [a, v] : s.points) {
      amin = std::min(amin, a);
      amax = std::max(amax, a);
      vmax = std::max(vmax, v);
    }
  if (series.empty()) {
    amin = 0.0;
    amax = 1.0;
  }
  if (amin == amax) {
    amin -= 0.5;
    amax += 0.5;
  }
  const double lmin = std::log10(kFloor);
  const double lmax = std::ceil(std::log10(vmax) - 1e-9);
  const double lspan = std::max(lmax - lmin, 1.0);

  auto sx = [&](double a) { return x0 + (a - amin) / (amax - amin) * w; };
  auto sy = [&](double v) {
    const double lv = std::log10(std::max(v, kFloor));
    return y0 + h - (lv - lmin) / lspan * h;
  };

  svg += "<rect x=\"" + fmt2(x0) + "\" y=\"" + fmt2(y0) + "\" width=\"" + fmt2(w) +
         "\" height=\"" + fmt2(h) + "\" class=\"frame\"/>\n";
  svg += "<text x=\"" + fmt2(x0 + w / 2) + "\" y=\"" + fmt2(y0 - 14) +
         "\" class=\"title\">" + title + "</text>\n";

  for (double lv = std::ceil(lmin); lv <= lmax + 1e-9; lv += 1.0) {
    const double y = sy(std::pow(10.0, lv));
    svg += "<line x1=\"" + fmt2(x0) + "\" y1=\"" + fmt2(y) + "\" x2=\"" +
           fmt2(x0 + w) + "\" y2=\"" + fmt2(y) + "\" class=\"grid\"/>\n";
    svg += "<text x=\"" + fmt2(x0 - 6) + "\" y=\"" + fmt2(y + 4) +
           "\" class=\"tick\" text-anchor=\"end\">" + fmt_tick(std::pow(10.0, lv)) +
           "</text>\n";
  }

  std::vector<double> xticks;
  for (const PlotSeries& s : series)
    for (auto [a, v] : s.points) xticks.push_back(a);
  std::sort(xticks.begin(), xticks.end());
  xticks.erase(std::unique(xticks.begin(), xticks.end()), xticks.end());
  if (xticks.size() > 10) xticks = {amin, amax};
  for (double a : xticks) {
    const double x = sx(a);
    svg += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(y0 + h) + "\" x2=\"" + fmt2(x) +
           "\" y2=\"" + fmt2(y0 + h + 5) + "\" class=\"grid\"/>\n";
    svg += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(y0 + h + 18) +
           "\" class=\"tick\" text-anchor=\"middle\">" + fmt_tick(a) + "</text>\n";
  }
  svg += "<text x=\"" + fmt2(x0 + w / 2) + "\" y=\"" + fmt2(y0 + h + 36) +
         "\" class=\"label\" text-anchor=\"middle\">alpha</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    auto pts = series[i].points;
    std::sort(pts.begin(), pts.end());
    std::string poly;
    for (auto [a, v] : pts) {
      if (!poly.empty()) poly += ' ';
      poly += fmt2(sx(a)) + "," + fmt2(sy(v));
    }
    if (pts.size() > 1)
      svg += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    for (auto [a, v] : pts)
      svg += "<circle class=\"pt\" cx=\"" + fmt2(sx(a)) + "\" cy=\"" + fmt2(sy(v)) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    svg += "<text x=\"" + fmt2(x0 + w - 6) + "\" y=\"" +
           fmt2(y0 + 14 + 14 * static_cast<double>(i)) +
           "\" class=\"tick\" text-anchor=\"end\" fill=\"" + color + "\">" +
           series[i].label + "</text>\n";
  }
}

}  // namespace detail

/// Hardness-curve figure: median wall time and median search effort vs
/// alpha on log-scale y axes, one series per (solver, m).
inline void emit_plot(const std::vector<CellSummary>& summaries, std::ostream& out) {
  std::map<std::pair<std::string, int>, detail::PlotSeries> time_series, node_series;
  for (const CellSummary& c : summaries) {
    const std::pair<std::string, int> key{c.solver, c.m};
    auto& ts = time_series[key];
    auto& ns = node_series[key];
    if (ts.label.empty())
      ts.label = ns.label = c.solver + " m=" + std::to_string(c.m);
    ts.points.emplace_back(c.alpha, c.time_ms.median);
    ns.points.emplace_back(c.alpha, c.search_nodes.median);
  }
  std::vector<detail::PlotSeries> ts, ns;
  for (auto& [k, s] : time_series) ts.push_back(std::move(s));
  for (auto& [k, s] : node_series) ns.push_back(std::move(s));

  std::string svg;
  svg +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"420\" "
      "viewBox=\"0 0 1000 420\">\n"
      "<style>\n"
      ".frame{fill:none;stroke:#333;stroke-width:1}\n"
      ".grid{stroke:#ccc;stroke-width:0.5}\n"
      ".tick{font:11px sans-serif;fill:#333}\n"
      ".label{font:13px sans-serif;fill:#111}\n"
      ".title{font:14px sans-serif;fill:#111;text-anchor:middle}\n"
      "</style>\n"
      "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"420\" fill=\"#ffffff\"/>\n";
  detail::plot_panel(svg, 70, 40, 380, 310, "median solve time (ms)", ts);
  detail::plot_panel(svg, 560, 40, 380, 310, "median search effort", ns);
  svg += "</svg>\n";
  out << svg;
}

inline void emit_plot(const std::vector<CellSummary>& summaries,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  emit_plot(summaries, out);
}

}  // namespace polarize
