// morlab: run, diagnose and plan from a config file.
//
//   morlab simulate --config run.cfg --out out/
//   morlab plan-exponents --n 1 --p 11

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "morlab/morlab.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw morlab::InvalidArgument("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step NLS / Hartree runs with Morawetz diagnostics"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  auto common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", config_path, "config file");
    if (need_config) opt->required();
    sub->add_option("--out", out_dir, "output directory (env MORLAB_OUT_DIR overrides)");
    sub->add_option("--seed", seed, "random seed, overrides the config");
  };
  auto* sim = app.add_subcommand("simulate", "evolve and write the trajectory and observables");
  auto* diag = app.add_subcommand("diagnose", "evolve and write the Morawetz report");
  auto* plan = app.add_subcommand("plan-exponents", "exact exponent plan as JSON");
  auto* scat = app.add_subcommand("scatter", "interaction-picture convergence probe");
  auto* sweep = app.add_subcommand("sweep", "one run per value of a config parameter");
  for (auto* s : {sim, diag, scat, sweep}) common(s, true);
  common(plan, false);
  sweep->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
  int plan_n = 0;
  std::string plan_p, plan_kind = "nls", plan_sigma;
  plan->add_option("--n", plan_n, "space dimension");
  plan->add_option("--p", plan_p, "power, as a rational a/b");
  plan->add_option("--kind", plan_kind, "nls or hartree")->check(CLI::IsMember({"nls", "hartree"}));
  plan->add_option("--sigma", plan_sigma, "chosen sigma (default: interval midpoint)");

  CLI11_PARSE(app, argc, argv);
  if (const char* env = std::getenv("MORLAB_OUT_DIR"); env && *env) out_dir = env;
  CLI::App* active = app.get_subcommands().front();
  const std::string cmd = active->get_name();

  try {
    morlab::RunConfig cfg;
    if (!config_path.empty()) cfg = morlab::parse_config(read_file(config_path));
    if (seed) cfg.seed = *seed;
    if (seed) cfg.text += "\n# seed override " + std::to_string(*seed);

    morlab::RunOutcome res;
    if (cmd == "plan-exponents") {
      morlab::PlanSpec ps;
      if (cfg.plan) ps = *cfg.plan;
      if (plan_n > 0) ps.n = plan_n;
      if (!plan_p.empty()) ps.p = morlab::Q::parse(plan_p);
      if (active->count("--kind"))
        ps.kind = plan_kind == "nls" ? morlab::NonlinearityKind::Nls : morlab::NonlinearityKind::Hartree;
      if (!plan_sigma.empty()) ps.sigma = morlab::Q::parse(plan_sigma);
      if (!cfg.plan && (plan_n <= 0 || plan_p.empty()))
        throw morlab::InvalidArgument("plan-exponents needs --n and --p or a [plan] section");
      std::string meta_text = cfg.text + "\n# plan " + std::to_string(ps.n) + " " + ps.p.str() +
                              " " + plan_kind + " " + plan_sigma;
      morlab::Metadata meta{morlab::hex64(morlab::fnv1a(meta_text)), cfg.seed, morlab::kVersion};
      res = morlab::run_plan(ps, meta, out_dir);
      std::cout << std::ifstream(std::filesystem::path(out_dir) / "plan.json").rdbuf();
    } else if (cmd == "sweep") {
      res = morlab::run_sweep(cfg, out_dir, jobs);
    } else {
      res = morlab::run_command(cmd, cfg, out_dir);
    }
    for (const auto& m : res.messages) std::cerr << m << "\n";
    return res.exit_code;
  } catch (const morlab::ConfigError& e) {
    for (const auto& m : e.errors()) std::cerr << "config error: " << m << "\n";
    return morlab::kExitConfig;
  } catch (const morlab::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return morlab::kExitConfig;
  }
}
