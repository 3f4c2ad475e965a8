#pragma once

// Artifact writers: per-frame CSV, JSON reports, the binary snapshot file
// and the metadata block stamped on all of them.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "morlab/config.hpp"
#include "morlab/exponents.hpp"
#include "morlab/morawetz_report.hpp"
#include "morlab/observables.hpp"
#include "morlab/scattering.hpp"

namespace morlab {

inline constexpr const char* kVersion = "1.0.0";

using Json = nlohmann::json;

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Metadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version = kVersion;

  static Metadata of(const RunConfig& cfg) { return {hex64(fnv1a(cfg.text)), cfg.seed, kVersion}; }
  Json json() const { return {{"config_hash", config_hash}, {"seed", seed}, {"version", version}}; }
  std::string csv_comment() const {
    return "# config_hash=" + config_hash + " seed=" + std::to_string(seed) + " version=" + version;
  }
};

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  require(static_cast<bool>(out), "cannot open " + p.string() + " for writing");
  out << s;
}

inline void write_json(const std::filesystem::path& p, const Json& j) { write_text(p, j.dump(2) + "\n"); }

struct CsvRow {
  double t = 0.0, mass = 0.0, energy = 0.0;
  std::array<double, 3> momentum{0.0, 0.0, 0.0};
  double j_quad = 0.0, m_quad = 0.0, k_term = 0.0, p_term = 0.0, r_term = 0.0, rate = 0.0;
  double boundary_mass = 0.0;
};

inline std::string diagnostics_csv(const std::vector<CsvRow>& rows, const Metadata& meta) {
  std::string s = meta.csv_comment() + "\n";
  s += "t,mass,energy,px,py,pz,j_quad,m_quad,k_term,p_term,r_term,rate,boundary_mass\n";
  for (const auto& r : rows) {
    const double v[] = {r.t, r.mass, r.energy, r.momentum[0], r.momentum[1], r.momentum[2],
                        r.j_quad, r.m_quad, r.k_term, r.p_term, r.r_term, r.rate, r.boundary_mass};
    for (std::size_t i = 0; i < std::size(v); ++i) s += (i ? "," : "") + fmt_double(v[i]);
    s += "\n";
  }
  return s;
}

inline Json report_json(const MorawetzReport& rep) {
  Json samples = Json::array();
  for (const auto& s : rep.samples)
    samples.push_back({{"t", s.t}, {"j_quad", s.J}, {"m_quad", s.M}, {"k_term", s.K},
                       {"p_term", s.P}, {"r_term", s.R}, {"r_imag", s.R_imag}, {"rate", s.rate}});
  return {{"identity_residual", rep.identity_residual},
          {"identity_relative", rep.identity_relative},
          {"rate_integral", rep.rate_integral},
          {"m_change", rep.m_change},
          {"bound_ratio_228", rep.bound_ratio_228},
          {"bound_ratio_a11", rep.bound_ratio_a11},
          {"fitted_c", rep.fitted_c},
          {"fitted_c_deviation", rep.fitted_c_deviation},
          {"m_nondecreasing", rep.m_nondecreasing},
          {"min_term_ratio", rep.min_term_ratio},
          {"max_imag_residue", rep.max_imag_residue},
          {"samples", samples}};
}

inline Json plan_json(const ExponentPlan& plan) {
  auto opt = [](const std::optional<Q>& q) { return q ? Json(q->str()) : Json(nullptr); };
  Json ledger = Json::array();
  for (const auto& c : plan.ledger) ledger.push_back({{"id", c.id}, {"satisfied", c.satisfied}});
  Json j = {{"n", plan.n},
            {"p", opt(plan.p)},
            {"kind", plan.kind == NonlinearityKind::Nls ? "nls" : "hartree"},
            {"branch", branch_name(plan.branch)},
            {"valid", plan.valid},
            {"reason", plan.reason},
            {"sigma_c", plan.sigma_c.str()},
            {"ledger", ledger}};
  if (plan.valid) {
    j["sigma_range"] = {{"lo", plan.range.lo.str()}, {"hi", plan.range.hi.str()},
                        {"lo_open", plan.range.lo_open}, {"hi_open", plan.range.hi_open}};
    j["sigma"] = plan.sigma.str();
    j["theta"] = plan.theta.str();
    j["delta"] = plan.delta.str();
    j["k"] = plan.k.str();
    j["ell"] = plan.ell.str();
  }
  j["q"] = opt(plan.q);
  j["r"] = opt(plan.r);
  j["sigma_0"] = opt(plan.sigma_0);
  j["sigma_plus"] = opt(plan.sigma_plus);
  j["sigma_minus"] = opt(plan.sigma_minus);
  j["r_min"] = opt(plan.r_min);
  return j;
}

inline Json scatter_json(const ScatterReport& rep) {
  Json sel = Json::array();
  for (auto i : rep.selected) sel.push_back(rep.times[i]);
  return {{"tail_sup", rep.tail_sup},
          {"threshold", rep.threshold},
          {"verdict", rep.converged ? "converged" : "not_converged"},
          {"decay_exponent", rep.decay_exponent},
          {"u_plus_h1", h1_norm(rep.u_plus)},
          {"selected_times", sel},
          {"distance_to_last", rep.distance_to_last},
          {"times", rep.times}};
}

inline std::string cauchy_csv(const ScatterReport& rep, const Metadata& meta) {
  std::string s = meta.csv_comment() + "\nt";
  for (auto i : rep.selected) s += "," + fmt_double(rep.times[i]);
  s += "\n";
  for (std::size_t a = 0; a < rep.selected.size(); ++a) {
    s += fmt_double(rep.times[rep.selected[a]]);
    for (double d : rep.cauchy_matrix[a]) s += "," + fmt_double(d);
    s += "\n";
  }
  return s;
}

/// Frames as little-endian f64, (re, im) interleaved, row-major; the JSON
/// sidecar carries the grid and the times.
inline void write_trajectory(const std::filesystem::path& bin, const TrajectoryRecord& traj,
                             const Metadata& meta) {
  if (bin.has_parent_path()) std::filesystem::create_directories(bin.parent_path());
  std::ofstream out(bin, std::ios::binary);
  require(static_cast<bool>(out), "cannot open " + bin.string() + " for writing");
  auto put = [&](double v) {
    std::uint64_t u = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
    out.write(reinterpret_cast<const char*>(&u), sizeof u);
  };
  for (const auto& f : traj.snapshots)
    for (const auto& z : f.values) {
      put(z.real());
      put(z.imag());
    }
  Json side = {{"format", "f64le complex interleaved, row-major, last axis fastest"},
               {"n", traj.empty() ? 0 : traj.grid().dim},
               {"N", traj.empty() ? 0 : traj.grid().points},
               {"L", traj.empty() ? 0.0 : traj.grid().half_length},
               {"frames", traj.size()},
               {"times", traj.times},
               {"metadata", meta.json()}};
  write_json(std::filesystem::path(bin.string() + ".json"), side);
}

inline TrajectoryRecord read_trajectory(const std::filesystem::path& bin) {
  std::ifstream side(bin.string() + ".json");
  require(static_cast<bool>(side), "missing sidecar for " + bin.string());
  const Json j = Json::parse(side);
  const GridSpec g = GridSpec::make(j["n"].get<int>(), j["N"].get<int>(), j["L"].get<double>());
  std::ifstream in(bin, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + bin.string());
  TrajectoryRecord traj;
  traj.times = j["times"].get<std::vector<double>>();
  auto get = [&]() {
    std::uint64_t u = 0;
    in.read(reinterpret_cast<char*>(&u), sizeof u);
    require(static_cast<bool>(in), "truncated trajectory file");
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
    return std::bit_cast<double>(u);
  };
  for (std::size_t f = 0; f < traj.times.size(); ++f) {
    ComplexField u(g);
    for (auto& z : u.values) {
      const double re = get();
      z = Complex(re, get());
    }
    traj.snapshots.push_back(std::move(u));
    traj.boundary_mass.push_back(boundary_mass(traj.snapshots.back()));
  }
  return traj;
}

}  // namespace morlab
