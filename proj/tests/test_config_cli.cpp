#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "morlab/morlab.hpp"

using namespace morlab;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(
[grid]
n = 1
N = 128
L = 10

[model]
kind = power
terms = 1:3

[run]
t1 = 0.2
dt = 1e-3
record_stride = 10

[initial]
kind = gaussian
)";

std::vector<std::string> config_errors(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MORLAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("morlab_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, MinimalParses) {
  const RunConfig cfg = parse_config(kMinimal);
  ASSERT_TRUE(cfg.grid.has_value());
  EXPECT_EQ(cfg.grid->points, 128);
  EXPECT_EQ(cfg.model.kind(), ModelKind::Power);
  EXPECT_EQ(cfg.model.terms().front().p, 3.0);
  EXPECT_EQ(cfg.run.record_stride, 10);
  EXPECT_EQ(cfg.initial.kind, InitialKind::Gaussian);
  EXPECT_EQ(cfg.diagnostics.weight.kind, WeightKind::AbsX);
}

TEST(Config, ReportsEveryProblemWithLines) {
  std::string bad = kMinimal;
  bad.replace(bad.find("N = 128"), 7, "N = 100");
  bad += "amplitude = 1\namplitude = 2\ncolour = red\n[extras]\n";
  const auto errs = config_errors(bad);
  EXPECT_TRUE(any_contains(errs, "[grid] N: must be a power of two")) << errs.size();
  EXPECT_TRUE(any_contains(errs, "duplicate key 'amplitude' (first set on line 18)"));
  EXPECT_TRUE(any_contains(errs, "line 20: [initial] colour: unknown key"));
  EXPECT_TRUE(any_contains(errs, "unknown section [extras]"));
  EXPECT_GE(errs.size(), 4u);
}

TEST(Config, MissingSectionsAndOverrides) {
  EXPECT_TRUE(any_contains(config_errors("[grid]\nn = 1\nN = 64\nL = 2\n"), "missing section [model]"));
  const RunConfig cfg = parse_config(kMinimal, {{"grid.N", "256"}, {"model.terms", "-1:5"}});
  EXPECT_EQ(cfg.grid->points, 256);
  EXPECT_FALSE(cfg.model.defocusing());
  EXPECT_NE(Metadata::of(cfg).config_hash, Metadata::of(parse_config(kMinimal)).config_hash);
  const RunConfig plan = parse_config("[plan]\nn = 5\np = 9/4\n");
  ASSERT_TRUE(plan.plan.has_value());
  EXPECT_EQ(plan.plan->p, Q(9, 4));
}

TEST(Ensemble, DeterministicWithTargetNorm) {
  const GridSpec g = GridSpec::make(2, 32, 6.0);
  EnsembleSpec spec;
  spec.h1_norm = 2.0;
  const auto a = random_ensemble(42, 5, g, spec);
  const auto b = random_ensemble(42, 5, g, spec);
  const auto c = random_ensemble(43, 5, g, spec);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].values, b[k].values);
    EXPECT_NEAR(h1_norm(a[k]), 2.0, 1e-12);
    EXPECT_GT(h1_distance(a[k], c[k]), 1e-3);
  }
  EXPECT_GT(h1_distance(a[0], a[1]), 1e-3);
}

TEST(Cli, PlanExponentsPinnedValue) {
  const fs::path out = scratch("plan");
  ASSERT_EQ(run_cli("plan-exponents --n 1 --p 11 --out " + out.string()), 0);
  const Json j = Json::parse(slurp(out / "plan.json"));
  EXPECT_EQ(j["sigma_minus"], "5/16");
  EXPECT_EQ(j["sigma_c"], "3/10");
  EXPECT_TRUE(j["valid"].get<bool>());
  EXPECT_EQ(run_cli("plan-exponents --n 1 --p 5 --out " + out.string()), kExitConfig);
}

TEST(Cli, ConfigErrorExitCode) {
  const fs::path dir = scratch("badcfg");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << "[grid]\nn = 1\nN = 100\nL = 5\n";
  EXPECT_EQ(run_cli("simulate --config " + (dir / "bad.cfg").string() + " --out " + dir.string()),
            kExitConfig);
  EXPECT_EQ(run_cli("simulate --config " + (dir / "missing.cfg").string()), kExitConfig);
}

TEST(Cli, RepeatedRunsAreBitIdentical) {
  const std::string cfg = std::string(MORLAB_CONFIGS) + "/random_sweep.cfg";
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(run_cli("diagnose --config " + cfg + " --out " + a.string()), 0);
  ASSERT_EQ(run_cli("diagnose --config " + cfg + " --out " + b.string()), 0);
  for (const char* f : {"diagnostics.csv", "report.json"}) {
    const std::string x = slurp(a / f), y = slurp(b / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, y) << f;
  }
  const fs::path c = scratch("det_c");
  ASSERT_EQ(run_cli("diagnose --seed 8 --config " + cfg + " --out " + c.string()), 0);
  EXPECT_NE(slurp(a / "diagnostics.csv"), slurp(c / "diagnostics.csv"));
}

TEST(Cli, SweepWritesIndexAndRuns) {
  const std::string cfg = std::string(MORLAB_CONFIGS) + "/random_sweep.cfg";
  const fs::path out = scratch("sweep");
  ASSERT_EQ(run_cli("sweep --jobs 2 --config " + cfg + " --out " + out.string()), 0);
  const Json idx = Json::parse(slurp(out / "index.json"));
  ASSERT_EQ(idx["runs"].size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const Json rep = Json::parse(slurp(out / idx["runs"][i]["dir"].get<std::string>() / "report.json"));
    EXPECT_EQ(rep["metadata"]["seed"].get<std::uint64_t>(), i + 1);
  }
}

TEST(Trajectory, BinaryRoundTrip) {
  const GridSpec g = GridSpec::make(2, 16, 3.0);
  const TrajectoryRecord tr = propagate(free_gaussian(g, {}), {0.0, 0.1, 0.01, 5, 1e6}, Model::free());
  const fs::path out = scratch("traj");
  write_trajectory(out / "trajectory.bin", tr, {"abc", 1, kVersion});
  const TrajectoryRecord back = read_trajectory(out / "trajectory.bin");
  ASSERT_EQ(back.size(), tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    EXPECT_EQ(back.times[i], tr.times[i]);
    EXPECT_EQ(back.snapshots[i].values, tr.snapshots[i].values);
  }
}
