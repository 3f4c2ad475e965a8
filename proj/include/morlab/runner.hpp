#pragma once

// Subcommands behind the command-line tool. Each writes its artifacts into
// one directory and returns a process exit code.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "morlab/config.hpp"
#include "morlab/io.hpp"

namespace morlab {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitBlowUp = 2, kExitInvariant = 3 };

inline ComplexField initial_data(const RunConfig& cfg) {
  require(cfg.grid.has_value(), "config has no grid");
  const GridSpec& g = *cfg.grid;
  switch (cfg.initial.kind) {
    case InitialKind::Soliton:
      return cubic_soliton(g, cfg.initial.soliton_amplitude, cfg.initial.soliton_center);
    case InitialKind::Random: {
      SplitMix64 rng(cfg.seed);
      return random_field(rng, g, cfg.initial.random);
    }
    default:
      return free_gaussian(g, cfg.initial.gaussian);
  }
}

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> messages;
};

namespace detail {

inline std::vector<CsvRow> frame_rows(const TrajectoryRecord& traj, const Model& model,
                                      const MorawetzReport* rep) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ObservableFrame f = frame(traj.snapshots[i], model, traj.times[i]);
    CsvRow r;
    r.t = f.t;
    r.mass = f.mass;
    r.energy = f.energy;
    for (std::size_t a = 0; a < f.momentum.size(); ++a) r.momentum[a] = f.momentum[a];
    if (rep) {
      const auto& s = rep->samples[i];
      r.j_quad = s.J;
      r.m_quad = s.M;
      r.k_term = s.K;
      r.p_term = s.P;
      r.r_term = s.R;
      r.rate = s.rate;
    }
    r.boundary_mass = traj.boundary_mass[i];
    rows.push_back(r);
  }
  return rows;
}

inline double mass_drift(const std::vector<CsvRow>& rows) {
  if (rows.empty() || rows.front().mass == 0.0) return 0.0;
  double d = 0.0;
  for (const auto& r : rows) d = std::max(d, std::abs(r.mass - rows.front().mass));
  return d / rows.front().mass;
}

}  // namespace detail

inline RunOutcome run_simulate(const RunConfig& cfg, const std::filesystem::path& out, bool diagnose) {
  RunOutcome res;
  const Metadata meta = Metadata::of(cfg);
  const TrajectoryRecord traj = propagate(initial_data(cfg), cfg.run, cfg.model);
  for (const auto& w : traj.warnings) res.messages.push_back("warning: " + w);
  std::optional<MorawetzReport> rep;
  if ((diagnose || cfg.diagnostics.morawetz) && traj.size() >= 3) {
    const WeightOperator op(cfg.diagnostics.weight, *cfg.grid, cfg.diagnostics.kernel_mode);
    rep = integrated_identity(traj, cfg.model, op);
  }
  const auto rows = detail::frame_rows(traj, cfg.model, rep ? &*rep : nullptr);
  write_text(out / "diagnostics.csv", diagnostics_csv(rows, meta));
  if (!diagnose) write_trajectory(out / "trajectory.bin", traj, meta);
  if (diagnose) {
    Json j = rep ? report_json(*rep) : Json::object();
    j["metadata"] = meta.json();
    j["warnings"] = traj.warnings;
    write_json(out / "report.json", j);
  }
  if (traj.blowup) {
    res.exit_code = kExitBlowUp;
    res.messages.push_back("blow-up at t=" + fmt_double(traj.blowup->t));
    return res;
  }
  const double tol = cfg.diagnostics.invariant_tolerance;
  if (detail::mass_drift(rows) > tol) {
    res.exit_code = kExitInvariant;
    res.messages.push_back("mass drift " + fmt_double(detail::mass_drift(rows)) + " exceeds tolerance");
  }
  if (diagnose && rep) {
    if (rep->identity_relative > tol) {
      res.exit_code = kExitInvariant;
      res.messages.push_back("Morawetz identity residual " + fmt_double(rep->identity_relative) +
                             " exceeds tolerance");
    }
    if (cfg.model.defocusing() && cfg.diagnostics.weight.kind == WeightKind::AbsX &&
        rep->bound_ratio_228 > 1.0 + 1e-6) {
      res.exit_code = kExitInvariant;
      res.messages.push_back("a priori bound on M violated");
    }
  }
  return res;
}

inline RunOutcome run_plan(const PlanSpec& ps, const Metadata& meta, const std::filesystem::path& out) {
  RunOutcome res;
  const ExponentPlan plan = plan_exponents(ps.n, ps.p, ps.kind, ps.sigma);
  Json j = plan_json(plan);
  j["metadata"] = meta.json();
  write_json(out / "plan.json", j);
  if (!plan.valid) {
    res.exit_code = kExitConfig;
    res.messages.push_back("no valid plan: " + plan.reason);
  }
  return res;
}

inline RunOutcome run_scatter(const RunConfig& cfg, const std::filesystem::path& out) {
  RunOutcome res;
  const Metadata meta = Metadata::of(cfg);
  const TrajectoryRecord traj = propagate(initial_data(cfg), cfg.run, cfg.model);
  if (traj.blowup) {
    res.exit_code = kExitBlowUp;
    res.messages.push_back("blow-up at t=" + fmt_double(traj.blowup->t));
    return res;
  }
  const ScatterReport rep = scatter_verdict(traj, cfg.diagnostics.scatter_threshold);
  Json j = scatter_json(rep);
  j["metadata"] = meta.json();
  j["warnings"] = traj.warnings;
  write_json(out / "scatter.json", j);
  write_text(out / "cauchy.csv", cauchy_csv(rep, meta));
  return res;
}

inline RunOutcome run_command(const std::string& cmd, const RunConfig& cfg,
                              const std::filesystem::path& out) {
  if (cmd == "simulate") return run_simulate(cfg, out, false);
  if (cmd == "diagnose") return run_simulate(cfg, out, true);
  if (cmd == "scatter") return run_scatter(cfg, out);
  if (cmd == "plan-exponents") {
    require(cfg.plan.has_value(), "config has no [plan] section");
    return run_plan(*cfg.plan, Metadata::of(cfg), out);
  }
  throw InvalidArgument("unknown subcommand '" + cmd + "'");
}

/// Runs the sweep's command once per value, each in its own directory, with
/// up to `jobs` runs at a time; index.json is written after all finish.
inline RunOutcome run_sweep(const RunConfig& cfg, const std::filesystem::path& out, int jobs) {
  require(cfg.sweep.has_value(), "config has no [sweep] section");
  const SweepSpec& sw = *cfg.sweep;
  const std::size_t count = sw.values.size();
  std::vector<RunOutcome> results(count);
  std::vector<std::string> dirs(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i; (i = next++) < count;) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%03zu", i);
      dirs[i] = name;
      try {
        RunConfig sub = parse_config(cfg.text, {{sw.parameter, sw.values[i]}});
        if (sw.parameter != "initial.seed") sub.seed = cfg.seed;
        results[i] = run_command(sw.command, sub, out / name);
      } catch (const ConfigError& e) {
        results[i] = {kExitConfig, {e.what()}};
      } catch (const std::exception& e) {
        results[i] = {kExitConfig, {e.what()}};
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunOutcome res;
  Json runs = Json::array();
  for (std::size_t i = 0; i < count; ++i) {
    runs.push_back({{"value", sw.values[i]}, {"dir", dirs[i]}, {"exit_code", results[i].exit_code},
                    {"messages", results[i].messages}});
    res.exit_code = std::max(res.exit_code, results[i].exit_code);
  }
  write_json(out / "index.json", {{"parameter", sw.parameter}, {"command", sw.command},
                                  {"runs", runs}, {"metadata", Metadata::of(cfg).json()}});
  return res;
}

}  // namespace morlab
