#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "spherecs/config.hpp"
#include "spherecs/error.hpp"
#include "spherecs/experiments.hpp"

using namespace spherecs;
namespace fs = std::filesystem;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults and round trip") {
  const auto def = parse_config("");
  CHECK(def.kind == ExperimentKind::CoherenceCompare);
  CHECK(def.bandwidth == 10);
  CHECK(def.trials == 50);
  CHECK(def.optimizer.tolerance == 1e-4);

  const auto cfg = parse_config(
      "# phase run\n"
      "experiment = phase_transition\n"
      "domain = SO3\n"
      "bandwidth = 4\n"
      "m = 30:80:10\n"
      "s = 1,5, 20\n"
      "patterns = proposed, uniform, tan13\n"
      "trials = 30\n"
      "threshold = 1e-3\n"
      "seed = 18446744073709551615\n"
      "solver = omp\n"
      "optimizer.decay = 0.25\n"
      "qcbp.gap_tol = 1e-8   # tighter\n");
  CHECK(cfg.kind == ExperimentKind::PhaseTransition);
  CHECK(cfg.domain == Domain::SO3);
  CHECK(cfg.m_grid == std::vector<int>{30, 40, 50, 60, 70, 80});
  CHECK(cfg.s_grid == std::vector<int>{1, 5, 20});
  CHECK(cfg.patterns.size() == 3);
  CHECK(cfg.seed == 18446744073709551615ull);
  CHECK(cfg.solver == SolverKind::Omp);
  CHECK(cfg.optimizer.decay == 0.25);
  CHECK(cfg.qcbp.gap_tol == 1e-8);

  const auto text = format_config(cfg);
  const auto back = parse_config(text);
  CHECK(format_config(back) == text);
  CHECK(back.m_grid == cfg.m_grid);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("integer grids") {
  CHECK(parse_int_grid("5") == std::vector<int>{5});
  CHECK(parse_int_grid("1:7:3") == std::vector<int>{1, 4, 7});
  CHECK(parse_int_grid("20:100:10").size() == 9);
  CHECK_THROWS(parse_int_grid("1:5:0"));
  CHECK_THROWS(parse_int_grid("a,b"));
  CHECK_THROWS(parse_int_grid(""));
}

TEST_CASE("errors carry the line") {
  CHECK(error_line("bandwidth = 4\nwidth = 3\n") == 2);
  CHECK(error_line("bandwidth = 4\n\nbandwidth = 5\n") == 3);
  CHECK(error_line("# c\nbandwidth 4\n") == 2);
  CHECK(error_line("trials = many\n") == 1);
  CHECK(error_line("domain = S2\nbandwidth = 1\n") == 2);
  CHECK(error_line("optimizer.decay = 1.5\n") == 1);
  CHECK(error_line("patterns = proposed,grid\n") == 1);
  CHECK_THROWS_AS(load_config("/nonexistent/spherecs.conf"), ConfigError);
}

TEST_CASE("experiment mismatch") {
  CHECK(parse_config("bandwidth = 4\n", ExperimentKind::IgrfDemo).kind == ExperimentKind::IgrfDemo);
  CHECK_THROWS_AS(parse_config("experiment = igrf_demo\n", ExperimentKind::PhaseTransition), ConfigError);
  CHECK_THROWS_AS(parse_experiment_kind("plot"), InvalidArgument);
}

TEST_CASE("coherence comparison output") {
  const auto dir = fresh_dir("spherecs_cfg_cc");
  const auto cfg = parse_config(
      "experiment = coherence_compare\nbandwidth = 5\nm = 20,30\n"
      "patterns = proposed,equiangular,spiral,fibonacci,hammersley\nseed = 3\n");
  const auto summary = run_experiment(cfg, dir);
  const auto csv = slurp(dir / "coherence.csv");
  CHECK(csv.rfind("# schema: m,N,B,domain,pattern,mu,q,r,lb_elev,welch\n", 0) == 0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::map<std::pair<std::string, int>, double> mu;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string tok; std::getline(ls, tok, ',');) f.push_back(tok);
    REQUIRE(f.size() == 10);
    mu[{f[4], std::stoi(f[0])}] = std::stod(f[5]);
  }
  CHECK(mu.size() == 10);
  for (int m : {20, 30})
    for (const char* fam : {"equiangular", "spiral", "fibonacci", "hammersley"})
      CHECK(mu[{"proposed", m}] <= mu[{fam, m}]);
  CHECK(fs::exists(dir / "pattern_proposed_m20.txt"));
  CHECK(fs::exists(dir / "summary.txt"));
  CHECK(slurp(dir / "summary.txt").find("total:") != std::string::npos);
  CHECK(parse_config(slurp(dir / "config.txt")).bandwidth == 5);
  fs::remove_all(dir);
}

TEST_CASE("same config gives identical csv files") {
  const auto cfg = parse_config(
      "experiment = phase_transition\nbandwidth = 3\nm = 4,9\ns = 1,2\ntrials = 3\n"
      "patterns = spiral,uniform\nseed = 5\n");
  const auto a = fresh_dir("spherecs_cfg_det_a");
  const auto b = fresh_dir("spherecs_cfg_det_b");
  run_experiment(cfg, a);
  run_experiment(cfg, b);
  for (const char* f : {"phase_spiral.csv", "phase_uniform.csv", "boundary.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
  CHECK(slurp(a / "boundary.csv").rfind("# schema: pattern,s,boundary_m\n", 0) == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("failed run removes its outputs") {
  // The second grid point puts both elevations on the poles, where the optimizer's
  // order-one columns vanish.
  const auto cfg = parse_config("experiment = optimize_pattern\nbandwidth = 2\nm = 5,2\n");
  const auto dir = fresh_dir("spherecs_cfg_fail");
  CHECK_THROWS(run_experiment(cfg, dir));
  CHECK_FALSE(fs::exists(dir));

  fs::create_directories(dir);
  std::ofstream(dir / "keep.txt") << "mine";
  CHECK_THROWS(run_experiment(cfg, dir));
  CHECK(fs::exists(dir / "keep.txt"));
  CHECK_FALSE(fs::exists(dir / "trace_m5.csv"));
  fs::remove_all(dir);
}

TEST_CASE("other experiments run") {
  const auto dir = fresh_dir("spherecs_cfg_misc");
  run_experiment(parse_config("experiment = optimize_pattern\nbandwidth = 4\nm = 12\n"), dir / "opt");
  CHECK(slurp(dir / "opt" / "optimize.csv").rfind(
            "# schema: m,mu,lower_bound,welch,stop,iterations,evaluations\n", 0) == 0);
  run_experiment(parse_config("experiment = igrf_demo\nbandwidth = 5\nm = 20\nigrf.sparsity = 3\n"
                              "patterns = fibonacci\nigrf.grid_lat = 10\nigrf.grid_lon = 12\n"),
                 dir / "igrf");
  CHECK(fs::exists(dir / "igrf" / "table_fibonacci_m20.txt"));
  run_experiment(parse_config("experiment = wigner_forward_demo\nbandwidth = 3\nm = 10\n"
                              "patterns = hammersley,equiangular\nforward.sparsity = 2\n"),
                 dir / "fwd");
  const auto fwd = slurp(dir / "fwd" / "forward.csv");
  CHECK(fwd.find("hammersley,10,20,") != std::string::npos);
  fs::remove_all(dir);
}

}  // TEST_SUITE
