#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "polarize/bench.hpp"
#include "polarize/generator.hpp"
#include "polarize/solvers.hpp"

using namespace polarize;

namespace {

std::string csv_of(const std::vector<ExperimentRecord>& records) {
  std::ostringstream ss;
  emit_csv(records, ss);
  return ss.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_occurrences(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

std::vector<ExperimentRecord> golden_records() {
  std::vector<ExperimentRecord> r(4);
  r[0] = {0.4, 25, 0, 17, "bnb", 0.0497, std::nullopt, 12, 257, false};
  r[1] = {0.4, 25, 0, 17, "ls", 0.0495, 0.9959758551307847, 3, 41, false};
  r[2] = {1.0, 25, 1, 18, "bnb", 0.6631, std::nullopt, 1, 2, false};
  r[3] = {1.0, 25, 1, 18, "ls", 0.6631, 1.0, 2, 38, false};
  return r;
}

}  // namespace

TEST_CASE("run_matrix output is schedule independent") {
  BenchGrid grid;
  grid.alphas = {0.4, 1.0};
  grid.sizes = {8, 10};
  grid.replicates = 3;
  grid.seed = 2024;

  BenchOptions seq;
  seq.threads = 1;
  BenchOptions par;
  par.threads = 4;

  const std::string a = csv_of(run_matrix(grid, seq));
  const std::string b = csv_of(run_matrix(grid, seq));
  CHECK(a == b);

  // identical rows up to timing under a different schedule: compare with
  // the time_ms column blanked
  auto strip_time = [](std::string csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
      // time_ms is the 8th comma-separated field
      int commas = 0;
      size_t start = 0, end = 0;
      for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] != ',') continue;
        if (++commas == 7) start = i + 1;
        if (commas == 8) end = i;
      }
      if (commas >= 8) line = line.substr(0, start) + "T" + line.substr(end);
      out += line;
      out += '\n';
    }
    return out;
  };
  const std::string c = csv_of(run_matrix(grid, par));
  CHECK(strip_time(a) == strip_time(c));
}

TEST_CASE("every record is reproducible from its seed") {
  BenchGrid grid;
  grid.alphas = {0.4};
  grid.sizes = {9};
  grid.replicates = 4;
  grid.seed = 555;
  const auto records = run_matrix(grid);
  REQUIRE(records.size() == 8);
  for (const ExperimentRecord& r : records) {
    CHECK(r.seed == cell_seed(grid.seed, 0, 0, r.rep));
    const UDebG g = generate({r.m, r.alpha, r.seed});
    if (r.solver == "bnb") {
      CHECK(solve_bnb(g).bippol == Catch::Approx(r.bippol).margin(1e-15));
    } else {
      CHECK(solve_ls(g, derive_seed(r.seed, kStreamBenchLs)).bippol ==
            Catch::Approx(r.bippol).margin(1e-15));
    }
  }
}

TEST_CASE("ls rows carry ratios against the completed exact solve") {
  BenchGrid grid;
  grid.alphas = {0.14, 1.0};
  grid.sizes = {10};
  grid.replicates = 5;
  grid.seed = 77;
  const auto records = run_matrix(grid);
  double exact = -1.0;
  for (const ExperimentRecord& r : records) {
    CHECK(r.bippol >= 0.0);
    CHECK(r.bippol <= 1.0);
    if (r.solver == "bnb") {
      CHECK(!r.ls_ratio);
      CHECK_FALSE(r.timeout);
      exact = r.bippol;
    } else {
      REQUIRE(r.ls_ratio.has_value());
      CHECK(*r.ls_ratio >= 0.0);
      CHECK(*r.ls_ratio <= 1.0 + 1e-9);
      CHECK(r.bippol <= exact + 1e-12);
    }
  }
}

TEST_CASE("run_matrix validates its configuration") {
  BenchGrid ok;
  ok.alphas = {0.5};
  ok.sizes = {5};
  ok.replicates = 1;
  BenchGrid bad = ok;
  bad.replicates = 0;
  CHECK_THROWS_AS(run_matrix(bad), ConfigError);
  bad = ok;
  bad.alphas.clear();
  CHECK_THROWS_AS(run_matrix(bad), ConfigError);
  BenchOptions opts;
  opts.solvers = {"simulated-annealing"};
  CHECK_THROWS_AS(run_matrix(ok, opts), ConfigError);
  opts = {};
  opts.timeout_ms = 0;
  CHECK_THROWS_AS(run_matrix(ok, opts), ConfigError);
}

TEST_CASE("summarize uses the lower-middle median") {
  std::vector<ExperimentRecord> records;
  for (int i = 0; i < 4; ++i) {
    ExperimentRecord r;
    r.alpha = 0.4;
    r.m = 25;
    r.rep = i;
    r.solver = "bnb";
    r.bippol = 1.0 + i;  // 1,2,3,4
    r.search_nodes = 10 * (i + 1);
    records.push_back(r);
  }
  auto cells = summarize(records);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].count == 4);
  CHECK(cells[0].bippol.min == 1.0);
  CHECK(cells[0].bippol.median == 2.0);
  CHECK(cells[0].bippol.max == 4.0);

  records.pop_back();
  cells = summarize(records);
  CHECK(cells[0].bippol.median == 2.0);  // odd count: the true middle
}

TEST_CASE("summarize matches an independent re-sort") {
  Rng rng(81);
  std::vector<ExperimentRecord> records;
  std::vector<double> values;
  for (int i = 0; i < 50; ++i) {
    ExperimentRecord r;
    r.alpha = 0.7;
    r.m = 30;
    r.rep = i;
    r.solver = "ls";
    r.bippol = rng.next_unit();
    values.push_back(r.bippol);
    records.push_back(r);
  }
  const auto cells = summarize(records);
  std::sort(values.begin(), values.end());
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].bippol.min == values.front());
  CHECK(cells[0].bippol.max == values.back());
  CHECK(cells[0].bippol.median == values[(values.size() - 1) / 2]);
}

TEST_CASE("summarize groups by cell and rejects empty input") {
  CHECK_THROWS_AS(summarize({}), ValidationError);
  std::vector<ExperimentRecord> records(4);
  records[0].alpha = 0.4;
  records[0].m = 25;
  records[0].solver = "bnb";
  records[1].alpha = 0.4;
  records[1].m = 30;
  records[1].solver = "bnb";
  records[2].alpha = 1.0;
  records[2].m = 25;
  records[2].solver = "bnb";
  records[3].alpha = 0.4;
  records[3].m = 25;
  records[3].solver = "ls";
  const auto cells = summarize(records);
  CHECK(cells.size() == 4);
  // sorted by (alpha, m, solver)
  CHECK(cells[0].m == 25);
  CHECK(cells[0].solver == "bnb");
  CHECK(cells[1].m == 25);
  CHECK(cells[1].solver == "ls");
  CHECK(cells[2].m == 30);
  CHECK(cells[3].alpha == 1.0);
}

TEST_CASE("empty record list gives a header-only CSV") {
  CHECK(csv_of({}) == std::string(kCsvHeader) + "\n");
}

TEST_CASE("golden CSV fixture stays byte-identical") {
  const std::string expect = slurp(std::string(TEST_DATA_DIR) + "/golden_bench.csv");
  CHECK(csv_of(golden_records()) == expect);
}

TEST_CASE("plot contains one point per series per panel") {
  const auto cells = summarize(golden_records());
  // 2 alphas x 1 m x 2 solvers -> 2 series, 2 points each, 2 panels
  std::ostringstream ss;
  emit_plot(cells, ss);
  const std::string svg = ss.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_occurrences(svg, "class=\"pt\"") == 8);

  // single cell: exactly one point per panel
  std::vector<ExperimentRecord> one(1);
  one[0].alpha = 0.4;
  one[0].m = 25;
  one[0].solver = "bnb";
  one[0].bippol = 0.05;
  one[0].search_nodes = 50;
  one[0].time_ms = 3;
  std::ostringstream ss1;
  emit_plot(summarize(one), ss1);
  CHECK(count_occurrences(ss1.str(), "class=\"pt\"") == 2);
}

TEST_CASE("plot bytes are deterministic") {
  const auto cells = summarize(golden_records());
  std::ostringstream a, b;
  emit_plot(cells, a);
  emit_plot(cells, b);
  CHECK(a.str() == b.str());
}
