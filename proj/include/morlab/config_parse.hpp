#pragma once

// parse_config: lexing into sections, then per-section typed reads.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "morlab/config.hpp"

namespace morlab {

namespace detail {

inline Sections lex_config(const std::string& text, std::vector<std::string>& errors) {
  static const std::set<std::string> known{"grid", "model", "run", "initial",
                                           "diagnostics", "plan", "sweep"};
  Sections out;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        errors.push_back("line " + std::to_string(line) + ": malformed section header");
        continue;
      }
      section = trim(s.substr(1, s.size() - 2));
      if (!known.count(section)) {
        errors.push_back("line " + std::to_string(line) + ": unknown section [" + section + "]");
      } else if (out.count(section)) {
        errors.push_back("line " + std::to_string(line) + ": section [" + section + "] repeated");
      }
      out[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line) + ": expected key = value");
      continue;
    }
    if (section.empty()) {
      errors.push_back("line " + std::to_string(line) + ": key outside of any section");
      continue;
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    auto& sec = out[section];
    if (auto it = sec.find(key); it != sec.end()) {
      errors.push_back("line " + std::to_string(line) + ": [" + section + "] duplicate key '" + key +
                       "' (first set on line " + std::to_string(it->second.line) + ")");
      continue;
    }
    sec[key] = {value, line};
  }
  return out;
}

inline bool power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

inline Model read_model(SectionReader& r, std::vector<std::string>& errors) {
  const std::string kind = r.choice("kind", "free", {"free", "power", "hartree"});
  if (kind == "power") {
    std::vector<PowerTerm> terms;
    if (r.has("terms")) {
      const Entry* e = r.find("terms");
      for (const auto& item : split_list(e->value)) {
        const auto colon = item.find(':');
        try {
          if (colon == std::string::npos) throw std::invalid_argument("no colon");
          terms.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
        } catch (const std::exception&) {
          r.error(e, "terms", "expected 'lambda:p' items, got '" + item + "'");
        }
      }
    } else {
      terms.push_back({r.real("lambda", 1.0, true), r.real("p", 3.0, true)});
    }
    try {
      return Model::power(terms);
    } catch (const InvalidArgument& ex) {
      r.error(nullptr, "terms", ex.what());
    }
  } else if (kind == "hartree") {
    HartreeKernel k;
    const std::string fam = r.choice("family", "gaussian", {"gaussian", "inverse_power"});
    k.family = fam == "gaussian" ? HartreeFamily::Gaussian : HartreeFamily::InversePower;
    k.a = r.real("a", k.a);
    k.gamma = r.real("gamma", k.gamma);
    k.epsilon = r.real("epsilon", k.epsilon);
    k.coupling = r.real("coupling", k.coupling);
    r.check(k.family != HartreeFamily::Gaussian || k.a > 0.0, "a", "must be positive");
    r.check(k.family != HartreeFamily::InversePower || k.epsilon > 0.0, "epsilon",
            "must be positive");
    r.check(k.family != HartreeFamily::InversePower || k.gamma > 0.0, "gamma", "must be positive");
    return Model::hartree(k);
  }
  (void)errors;
  return Model::free();
}

inline WeightSpec read_weight(SectionReader& r, int dim) {
  const std::string kind = r.choice("weight", "abs_x", {"abs_x", "directional", "projection"});
  WeightSpec w;
  if (kind == "directional") {
    w = WeightSpec::directional(r.vector("theta", {1.0, 0.0, 0.0}));
  } else if (kind == "projection") {
    const Vec3 diag = r.vector("projection_diagonal", {1.0, 0.0, 0.0});
    Mat3 P{};
    for (int a = 0; a < 3; ++a) P[a][a] = diag[a];
    w = WeightSpec::projector(P);
  }
  try {
    w.validate(dim);
  } catch (const InvalidArgument& ex) {
    r.error(nullptr, "weight", ex.what());
  }
  return w;
}

inline std::optional<Q> read_rational(SectionReader& r, const std::string& key, bool required) {
  const Entry* e = r.find(key);
  if (!e) {
    if (required) r.error(nullptr, key, "missing required key");
    return std::nullopt;
  }
  try {
    return Q::parse(e->value);
  } catch (const InvalidArgument&) {
    r.error(e, key, "not a rational: '" + e->value + "'");
    return std::nullopt;
  }
}

}  // namespace detail

/// Overrides ("section.key" -> value) replace or add entries after lexing.
inline RunConfig parse_config(const std::string& text,
                              const std::map<std::string, std::string>& overrides = {}) {
  using namespace detail;
  std::vector<std::string> errors;
  Sections secs = lex_config(text, errors);
  for (const auto& [path, value] : overrides) {
    const auto dot = path.find('.');
    if (dot == std::string::npos) {
      errors.push_back("override '" + path + "' is not of the form section.key");
      continue;
    }
    secs[path.substr(0, dot)][path.substr(dot + 1)] = {value, 0};
  }
  auto section = [&](const std::string& name) {
    auto it = secs.find(name);
    return SectionReader(name, it == secs.end() ? nullptr : &it->second, errors);
  };

  RunConfig cfg;
  cfg.text = text;
  for (const auto& [path, value] : overrides) cfg.text += "\n# override " + path + " = " + value;

  const bool plan_only = secs.count("plan") && !secs.count("grid") && !secs.count("model") &&
                         !secs.count("run") && !secs.count("initial");
  if (!plan_only)
    for (const char* req : {"grid", "model", "run", "initial"})
      if (!secs.count(req)) errors.push_back(std::string("missing section [") + req + "]");

  SectionReader g = section("grid");
  int dim = 1;
  if (g.present()) {
    GridSpec spec;
    spec.dim = static_cast<int>(g.integer("n", 1, true));
    spec.points = static_cast<int>(g.integer("N", 256, true));
    spec.half_length = g.real("L", 20.0, true);
    g.check(spec.dim >= 1 && spec.dim <= 3, "n", "must be 1, 2 or 3");
    g.check(power_of_two(spec.points), "N", "must be a power of two");
    g.check(spec.points >= 4, "N", "must be at least 4");
    g.check(spec.half_length > 0.0, "L", "must be positive");
    dim = spec.dim;
    cfg.grid = spec;
    g.reject_unknown();
  }

  SectionReader m = section("model");
  if (m.present()) cfg.model = read_model(m, errors);
  m.reject_unknown();

  SectionReader r = section("run");
  cfg.run.t0 = r.real("t0", 0.0);
  cfg.run.t1 = r.real("t1", 1.0, r.present());
  cfg.run.dt = r.real("dt", 1e-3, r.present());
  cfg.run.record_stride = static_cast<int>(r.integer("record_stride", 10));
  cfg.run.blowup_threshold = r.real("blowup_threshold", 1e6);
  r.check(cfg.run.dt > 0.0, "dt", "must be positive");
  r.check(cfg.run.t1 > cfg.run.t0, "t1", "must exceed t0");
  r.check(cfg.run.record_stride >= 1, "record_stride", "must be >= 1");
  r.check(cfg.run.blowup_threshold > 0.0, "blowup_threshold", "must be positive");
  r.reject_unknown();

  SectionReader in = section("initial");
  const std::string ik = in.choice("kind", "gaussian", {"gaussian", "soliton", "random"});
  cfg.initial.kind = ik == "gaussian" ? InitialKind::Gaussian
                     : ik == "soliton" ? InitialKind::Soliton : InitialKind::Random;
  auto& gd = cfg.initial.gaussian;
  gd.amplitude = in.real("amplitude", gd.amplitude);
  gd.width = in.real("width", gd.width);
  gd.center = in.vector("center", gd.center);
  gd.velocity = in.vector("velocity", gd.velocity);
  cfg.initial.soliton_amplitude = gd.amplitude;
  cfg.initial.soliton_center = gd.center[0];
  cfg.seed = in.unsigned64("seed", 0);
  cfg.initial.random.modes = static_cast<int>(in.integer("modes", 4));
  cfg.initial.random.h1_norm = in.real("h1_norm", 1.0);
  cfg.initial.random.envelope = in.real("envelope", 0.0);
  in.check(gd.width > 0.0, "width", "must be positive");
  in.check(cfg.initial.random.modes >= 1, "modes", "must be >= 1");
  in.check(cfg.initial.random.h1_norm > 0.0, "h1_norm", "must be positive");
  in.check(ik != "soliton" || dim == 1, "kind", "soliton data needs n = 1");
  in.check(ik != "soliton" || gd.amplitude > 0.0, "amplitude", "must be positive");
  in.reject_unknown();

  SectionReader d = section("diagnostics");
  auto& dg = cfg.diagnostics;
  dg.weight = read_weight(d, dim);
  dg.kernel_mode = d.choice("kernel_mode", "spectral", {"spectral", "sampled"}) == "spectral"
                       ? KernelMode::Spectral : KernelMode::Sampled;
  dg.morawetz = d.boolean("morawetz", dg.morawetz);
  dg.scatter = d.boolean("scatter", dg.scatter);
  dg.strichartz = d.boolean("strichartz", dg.strichartz);
  dg.scatter_threshold = d.real("scatter_threshold", dg.scatter_threshold);
  dg.invariant_tolerance = d.real("invariant_tolerance", dg.invariant_tolerance);
  dg.wave_tol = d.real("wave_tol", dg.wave_tol);
  dg.wave_time = d.real("wave_time", dg.wave_time);
  d.check(dg.scatter_threshold > 0.0, "scatter_threshold", "must be positive");
  d.check(dg.invariant_tolerance > 0.0, "invariant_tolerance", "must be positive");
  d.check(dg.wave_tol > 0.0, "wave_tol", "must be positive");
  d.reject_unknown();

  SectionReader p = section("plan");
  if (p.present()) {
    PlanSpec ps;
    ps.n = static_cast<int>(p.integer("n", dim, true));
    if (auto v = read_rational(p, "p", true)) ps.p = *v;
    ps.kind = p.choice("kind", "nls", {"nls", "hartree"}) == "nls" ? NonlinearityKind::Nls
                                                                  : NonlinearityKind::Hartree;
    ps.sigma = read_rational(p, "sigma", false);
    p.check(ps.n >= 1, "n", "must be >= 1");
    cfg.plan = ps;
  }
  p.reject_unknown();

  SectionReader s = section("sweep");
  if (s.present()) {
    SweepSpec sw;
    sw.parameter = s.text("parameter", "", true);
    sw.values = split_list(s.text("values", "", true));
    sw.command = s.choice("command", "simulate", {"simulate", "diagnose", "scatter"});
    s.check(sw.parameter.find('.') != std::string::npos, "parameter", "must be section.key");
    s.check(!sw.values.empty(), "values", "needs at least one value");
    cfg.sweep = sw;
  }
  s.reject_unknown();

  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

}  // namespace morlab
