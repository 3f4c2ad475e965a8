#pragma once

// Sectioned key = value run configuration. Every problem found is reported,
// each with its line number.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "morlab/ensemble.hpp"
#include "morlab/exponents.hpp"
#include "morlab/interaction.hpp"
#include "morlab/kernels.hpp"
#include "morlab/propagator.hpp"

namespace morlab {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& e) {
    std::string s;
    for (const auto& x : e) s += (s.empty() ? "" : "\n") + x;
    return s;
  }
  std::vector<std::string> errors_;
};

enum class InitialKind { Gaussian, Soliton, Random };

struct InitialSpec {
  InitialKind kind = InitialKind::Gaussian;
  GaussianData gaussian;
  double soliton_amplitude = 1.0;
  double soliton_center = 0.0;
  EnsembleSpec random;
};

struct DiagnosticsSpec {
  WeightSpec weight;
  KernelMode kernel_mode = KernelMode::Spectral;
  bool morawetz = true;
  bool scatter = false;
  bool strichartz = false;
  double scatter_threshold = 1e-3;
  double invariant_tolerance = 1e-4;
  double wave_tol = 1e-8;
  double wave_time = 10.0;
};

struct PlanSpec {
  int n = 3;
  Q p = Q(3);
  NonlinearityKind kind = NonlinearityKind::Nls;
  std::optional<Q> sigma;
};

struct SweepSpec {
  std::string parameter;  // "section.key"
  std::vector<std::string> values;
  std::string command = "simulate";
};

struct RunConfig {
  std::optional<GridSpec> grid;
  Model model;
  StepperConfig run;
  InitialSpec initial;
  DiagnosticsSpec diagnostics;
  std::optional<PlanSpec> plan;
  std::optional<SweepSpec> sweep;
  std::uint64_t seed = 0;
  std::string text;  // normalized source, hashed into every artifact
};

namespace detail {

struct Entry {
  std::string value;
  int line = 0;
};
using Sections = std::map<std::string, std::map<std::string, Entry>>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Typed access to one section, collecting errors instead of throwing.
class SectionReader {
 public:
  SectionReader(const std::string& name, const std::map<std::string, Entry>* entries,
                std::vector<std::string>& errors)
      : name_(name), entries_(entries), errors_(errors) {}

  bool present() const { return entries_ != nullptr; }
  bool has(const std::string& key) const { return entries_ && entries_->count(key); }

  const Entry* find(const std::string& key) {
    used_.insert(key);
    if (!entries_) return nullptr;
    auto it = entries_->find(key);
    return it == entries_->end() ? nullptr : &it->second;
  }

  void error(const Entry* e, const std::string& key, const std::string& msg) {
    errors_.push_back((e ? "line " + std::to_string(e->line) + ": " : std::string()) + "[" + name_ +
                      "] " + key + ": " + msg);
  }

  double real(const std::string& key, double def, bool required = false) {
    const Entry* e = find(key);
    if (!e) {
      if (required) error(nullptr, key, "missing required key");
      return def;
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      error(e, key, "not a number: '" + e->value + "'");
      return def;
    }
  }

  long long integer(const std::string& key, long long def, bool required = false) {
    const Entry* e = find(key);
    if (!e) {
      if (required) error(nullptr, key, "missing required key");
      return def;
    }
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      error(e, key, "not an integer: '" + e->value + "'");
      return def;
    }
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t def) {
    const Entry* e = find(key);
    if (!e) return def;
    try {
      std::size_t pos = 0;
      if (!e->value.empty() && e->value[0] == '-') throw std::invalid_argument("negative");
      const std::uint64_t v = std::stoull(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      error(e, key, "not an unsigned 64-bit integer: '" + e->value + "'");
      return def;
    }
  }

  bool boolean(const std::string& key, bool def) {
    const Entry* e = find(key);
    if (!e) return def;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    error(e, key, "not a boolean: '" + e->value + "'");
    return def;
  }

  std::string text(const std::string& key, const std::string& def, bool required = false) {
    const Entry* e = find(key);
    if (!e) {
      if (required) error(nullptr, key, "missing required key");
      return def;
    }
    return e->value;
  }

  std::string choice(const std::string& key, const std::string& def,
                     const std::vector<std::string>& allowed) {
    const Entry* e = find(key);
    if (!e) return def;
    for (const auto& a : allowed)
      if (e->value == a) return a;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    error(e, key, "'" + e->value + "' is not one of " + list);
    return def;
  }

  Vec3 vector(const std::string& key, Vec3 def) {
    const Entry* e = find(key);
    if (!e) return def;
    const auto parts = split_list(e->value);
    if (parts.empty() || parts.size() > 3) {
      error(e, key, "expected 1 to 3 comma-separated numbers");
      return def;
    }
    Vec3 v{0.0, 0.0, 0.0};
    try {
      for (std::size_t i = 0; i < parts.size(); ++i) v[i] = std::stod(parts[i]);
    } catch (const std::exception&) {
      error(e, key, "not a list of numbers: '" + e->value + "'");
      return def;
    }
    return v;
  }

  void check(bool ok, const std::string& key, const std::string& msg) {
    if (!ok) error(entries_ && entries_->count(key) ? &entries_->at(key) : nullptr, key, msg);
  }

  void reject_unknown() {
    if (!entries_) return;
    for (const auto& [k, e] : *entries_)
      if (!used_.count(k)) error(&e, k, "unknown key");
  }

 private:
  std::string name_;
  const std::map<std::string, Entry>* entries_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

}  // namespace detail

}  // namespace morlab

#include "morlab/config_parse.hpp"
