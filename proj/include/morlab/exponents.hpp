#pragma once

// Exponent bookkeeping for the Strichartz / Morawetz interpolation argument,
// in exact rational arithmetic. Every plan re-verifies its relations on
// construction and records each check in a ledger.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morlab/rational.hpp"

namespace morlab {

using Q = Rational;

/// delta(r) = n/2 - n/r, with r = inf giving n/2.
inline Q delta_of(int n, const Q& r) {
  require(r >= Q(1), "exponent r must be >= 1");
  return Q(n, 2) - Q(n) * r.reciprocal();
}

struct Admissibility {
  bool admissible = false;
  std::string violated;  // empty when admissible
};

/// (q, r) admissible in dimension n: 2/q = delta(r) with delta >= 0 and
/// delta <= 1/2 (n = 1), delta < 1 (n = 2), delta <= 1 (n >= 3).
inline Admissibility is_admissible(int n, const Q& q, const Q& r) {
  require(n >= 1, "dimension must be >= 1");
  if (q < Q(1) || r < Q(1)) return {false, "exponents must be >= 1"};
  const Q d = delta_of(n, r);
  if (d < Q(0)) return {false, "delta(r) < 0 (r < 2)"};
  if (Q(2) * q.reciprocal() != d) return {false, "2/q != delta(r)"};
  if (n == 1 && d > Q(1, 2)) return {false, "delta(r) > 1/2 for n = 1"};
  if (n == 2 && d >= Q(1)) return {false, "delta(r) >= 1 for n = 2"};
  if (n >= 3 && d > Q(1)) return {false, "delta(r) > 1 for n >= 3"};
  return {true, ""};
}

enum class NonlinearityKind { Nls, Hartree };

struct SigmaC {
  Q value;
  bool in_range = false;  // 0 < sigma_c < 1, with the n = 1 and n = 3 Hartree caps
};

inline SigmaC sigma_c(int n, const Q& p, NonlinearityKind kind) {
  SigmaC s;
  if (kind == NonlinearityKind::Nls) {
    require(p > Q(1), "power p must exceed 1");
    s.value = Q(n, 2) - Q(2) / (p - Q(1));
    s.in_range = s.value > Q(0) && s.value < Q(1) && (n != 1 || s.value < Q(1, 2));
  } else {
    require(p >= Q(1), "Hartree exponent p must be >= 1");
    s.value = Q(n) / (Q(2) * p) - Q(1);
    s.in_range = s.value > Q(0) && s.value < Q(1) && (n != 3 || s.value <= Q(1, 2));
  }
  return s;
}

struct SigmaM {
  Q value;
  std::vector<std::pair<int, bool>> checks;  // (n, 1 + n/2 + (n-3)/2 == 2(n/2 - value))
};

/// Regularity degree of the Morawetz quantity, with its dimensional check
/// for n = 1..5.
inline SigmaM sigma_M() {
  SigmaM s{Q(1, 4), {}};
  for (int n = 1; n <= 5; ++n) {
    const Q lhs = Q(1) + Q(n, 2) + Q(n - 3, 2);
    const Q rhs = Q(2) * (Q(n, 2) - s.value);
    s.checks.emplace_back(n, lhs == rhs);
  }
  return s;
}

/// Degree sigma + delta(r) - 2/q of the norm L^q(H^sigma_r).
inline Q homogeneity_degree(int n, const Q& q, const Q& r, const Q& sigma) {
  return sigma + delta_of(n, r) - Q(2) * q.reciprocal();
}

struct Constraint {
  std::string id;
  bool satisfied = false;
};

enum class PlanBranch { HighDim, OneDimMain, OneDimLow, Hartree };

inline const char* branch_name(PlanBranch b) {
  switch (b) {
    case PlanBranch::HighDim: return "n>=2";
    case PlanBranch::OneDimMain: return "n=1 main";
    case PlanBranch::OneDimLow: return "n=1 low sigma_c";
    case PlanBranch::Hartree: return "hartree";
  }
  return "";
}

struct SigmaInterval {
  Q lo, hi;
  bool lo_open = false, hi_open = false;

  bool contains(const Q& s) const {
    const bool above = lo_open ? s > lo : s >= lo;
    const bool below = hi_open ? s < hi : s <= hi;
    return above && below;
  }
  bool empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
  Q midpoint() const { return (lo + hi) / Q(2); }
};

struct ExponentPlan {
  int n = 0;
  std::optional<Q> p;
  NonlinearityKind kind = NonlinearityKind::Nls;
  Q sigma_c;
  PlanBranch branch = PlanBranch::HighDim;
  SigmaInterval range;
  Q sigma, theta, delta;
  Q k, ell;                  // L^k(L^ell)
  std::optional<Q> q, r;     // auxiliary admissible pair (n = 1)
  std::optional<Q> sigma_0, sigma_plus, sigma_minus, r_min;
  std::vector<Constraint> ledger;
  bool valid = false;
  std::string reason;

  void check(const std::string& id, bool ok) { ledger.push_back({id, ok}); }
  void finalize() {
    valid = !ledger.empty();
    for (const auto& c : ledger) valid = valid && c.satisfied;
    if (!valid && reason.empty()) {
      for (const auto& c : ledger)
        if (!c.satisfied) reason += (reason.empty() ? "failed: " : ", ") + c.id;
    }
  }
};

namespace detail {

inline ExponentPlan invalid_plan(int n, NonlinearityKind kind, const Q& sc, PlanBranch b,
                                 const std::string& why) {
  ExponentPlan plan;
  plan.n = n;
  plan.kind = kind;
  plan.sigma_c = sc;
  plan.branch = b;
  plan.reason = why;
  plan.valid = false;
  return plan;
}

inline Q theta_from(const Q& sc, const Q& sigma) { return (sc - sigma) / (Q(1, 4) - sigma); }

/// sigma interval and the pivot theta for n >= 2 (the NLS and Hartree plans
/// share it). Returns nullopt when the interval is empty.
inline std::optional<SigmaInterval> high_dim_interval(int n, const Q& sc, ExponentPlan& plan) {
  const Q quarter(1, 4);
  if (n >= 4) {
    const Q denom = Q(n - 2) - Q(4) * sc;
    if (denom > Q(0)) plan.sigma_0 = sc * Q(n - 3) / denom;
  }
  SigmaInterval iv;
  if (sc == quarter) {
    iv = {quarter, quarter, false, false};
  } else if (sc < quarter) {
    iv = {n >= 4 ? *plan.sigma_0 : Q(0), sc, false, true};
  } else {
    Q hi(1);
    if (n >= 4 && plan.sigma_0) hi = min(*plan.sigma_0, Q(1));
    iv = {sc, hi, true, false};
  }
  if (iv.empty()) return std::nullopt;
  return iv;
}

inline void fill_high_dim(ExponentPlan& plan, const std::optional<Q>& chosen) {
  const int n = plan.n;
  const Q& sc = plan.sigma_c;
  auto iv = high_dim_interval(n, sc, plan);
  if (!iv) {
    plan.reason = "empty sigma interval";
    plan.valid = false;
    return;
  }
  plan.range = *iv;
  plan.sigma = chosen ? *chosen : iv->midpoint();
  if (!iv->contains(plan.sigma)) {
    plan.check("sigma in admissible interval", false);
    plan.finalize();
    return;
  }
  if (sc == Q(1, 4)) {
    plan.theta = n >= 4 ? Q(1, n - 2) : Q(1);
  } else {
    plan.theta = theta_from(sc, plan.sigma);
  }
  plan.k = Q(4) / plan.theta;
  const Q n_over_ell = Q(n, 2) - sc - plan.theta / Q(2);
  plan.ell = n_over_ell == Q(0) ? Q::infinity() : Q(n) / n_over_ell;
}

}  // namespace detail

/// NLS plan for n >= 2 from sigma_c (the p-free form; see plan_nls_high_dim).
inline ExponentPlan plan_nls_high_dim_sc(int n, const Q& sc, std::optional<Q> sigma = {}) {
  require(n >= 2, "high-dimensional plan needs n >= 2");
  if (!(sc > Q(0) && sc < Q(1)))
    return detail::invalid_plan(n, NonlinearityKind::Nls, sc, PlanBranch::HighDim,
                                "sigma_c outside (0, 1)");
  ExponentPlan plan;
  plan.n = n;
  plan.kind = NonlinearityKind::Nls;
  plan.sigma_c = sc;
  plan.branch = PlanBranch::HighDim;
  detail::fill_high_dim(plan, sigma);
  if (!plan.reason.empty() || !plan.ledger.empty()) {
    plan.finalize();
    return plan;
  }
  const Q& th = plan.theta;
  const Q& s = plan.sigma;
  plan.check("homogeneity", sc == th / Q(4) + (Q(1) - th) * s);
  if (n >= 4) {
    plan.check("sobolev_embedding", th * Q(n - 3) / Q(4) <= (Q(1) - th) * s);
    plan.check("theta_cap", th * (Q(n - 3) + Q(4) * s) <= Q(4) * s);
  }
  plan.check("0<theta<=1", th > Q(0) && th <= Q(1));
  plan.check("0<=sigma<=1", s >= Q(0) && s <= Q(1));
  plan.check("interpolation_exponents", Q(2) / plan.k == th / Q(2) &&
                        Q(n) / plan.ell == th * (Q(n, 2) - Q(3, 4)) + (Q(1) - th) * (Q(n, 2) - s));
  plan.check("scaling", Q(2) / plan.k + Q(n) / plan.ell == Q(n, 2) - sc);
  plan.delta = Q(n) / plan.ell / (Q(n, 2) - sc);
  plan.check("delta_form", Q(2) / plan.k == (Q(n, 2) - sc) * (Q(1) - plan.delta));
  plan.check("0<=delta<1", plan.delta >= Q(0) && plan.delta < Q(1));
  plan.finalize();
  return plan;
}

inline ExponentPlan plan_nls_high_dim(int n, const Q& p, std::optional<Q> sigma = {}) {
  require(n >= 2, "high-dimensional plan needs n >= 2");
  const SigmaC sc = sigma_c(n, p, NonlinearityKind::Nls);
  ExponentPlan plan = plan_nls_high_dim_sc(n, sc.value, sigma);
  plan.p = p;
  return plan;
}

/// NLS plan for n = 1 from sigma_c in (0, 1/2).
inline ExponentPlan plan_nls_1d_sc(const Q& sc, std::optional<Q> sigma = {}) {
  const Q quarter(1, 4), tenth(1, 10);
  if (!(sc > Q(0) && sc < Q(1, 2)))
    return detail::invalid_plan(1, NonlinearityKind::Nls, sc, PlanBranch::OneDimMain,
                                "sigma_c outside (0, 1/2)");
  ExponentPlan plan;
  plan.n = 1;
  plan.kind = NonlinearityKind::Nls;
  plan.sigma_c = sc;
  plan.sigma_plus = (Q(6) * sc - Q(1)) / (Q(8) * sc);
  plan.sigma_minus = (Q(10) * sc - Q(1)) / (Q(8) * sc + Q(4));

  if (sc < tenth) {
    plan.branch = PlanBranch::OneDimLow;
    plan.range = {Q(0), Q(0), false, false};
    plan.sigma = Q(0);
    if (sigma && *sigma != Q(0)) {
      plan.check("sigma = 0 on the low branch", false);
      plan.finalize();
      return plan;
    }
    plan.r = Q(4) / ((Q(1) + Q(2) * sc) / (Q(1) - Q(4) * sc));
    plan.theta = Q(4) * sc;
  } else {
    plan.branch = PlanBranch::OneDimMain;
    plan.r = Q(2);
    if (sc == quarter) {
      plan.range = {quarter, quarter, false, false};
    } else if (sc < quarter) {
      plan.range = {max(Q(0), *plan.sigma_plus), *plan.sigma_minus, false, false};
    } else {
      plan.range = {*plan.sigma_minus, *plan.sigma_plus, false, false};
    }
    plan.sigma = sigma ? *sigma : plan.range.midpoint();
    if (!plan.range.contains(plan.sigma)) {
      plan.check("sigma in admissible interval", false);
      plan.finalize();
      return plan;
    }
    plan.theta = sc == quarter ? Q(1, 2) : detail::theta_from(sc, plan.sigma);
    if (sc > quarter && plan.sigma > sc)
      plan.r_min = Q(4) / ((Q(1) + Q(2) * sc) * (Q(4) * plan.sigma - Q(1)) / (Q(4) * sc - Q(1)));
  }

  const Q& th = plan.theta;
  const Q& s = plan.sigma;
  const Q& r = *plan.r;
  const Q inv_r = r.reciprocal();
  plan.q = (Q(1, 2) - inv_r).reciprocal() * Q(2);  // 2/q = delta(r) = 1/2 - 1/r
  plan.k = (th / Q(2) + (Q(1) - th) * Q(2) * plan.q->reciprocal()).reciprocal() * Q(2);
  const Q inv_ell = -th / Q(4) + (Q(1) - th) * (inv_r - s);
  plan.ell = inv_ell.reciprocal();

  plan.check("homogeneity", sc == th / Q(4) + (Q(1) - th) * s);
  plan.check("ell_range", inv_ell >= Q(0) && inv_ell <= (Q(1, 2) - sc) / Q(2));
  if (sc != quarter) {
    const Q mid = (Q(4) * sc - Q(1)) / ((Q(4) * s - Q(1)) * r);
    plan.check("r_chain", sc <= mid && mid <= (Q(1) + Q(2) * sc) / Q(4));
    plan.check("sigma_side", (s >= Q(0) && s < sc && sc < quarter) ||
                           (quarter < sc && sc < s && s < Q(1, 2)));
  }
  plan.check("sigma_below_inv_r", s < inv_r && inv_r <= Q(1, 2) && s >= Q(0));
  plan.check("0<theta<=1", th > Q(0) && th <= Q(1));
  plan.check("admissible(q,r)", is_admissible(1, *plan.q, r).admissible);
  plan.check("scaling", Q(2) / plan.k + inv_ell == Q(1, 2) - sc);
  plan.delta = inv_ell / (Q(1, 2) - sc);
  plan.check("delta_form", Q(2) / plan.k == (Q(1, 2) - sc) * (Q(1) - plan.delta) &&
                         plan.delta >= Q(0) && plan.delta <= Q(1, 2));
  plan.finalize();
  return plan;
}

inline ExponentPlan plan_nls_1d(const Q& p, std::optional<Q> sigma = {}) {
  const SigmaC sc = sigma_c(1, p, NonlinearityKind::Nls);
  ExponentPlan plan = plan_nls_1d_sc(sc.value, sigma);
  plan.p = p;
  return plan;
}

/// Hartree plan, n >= 3, n/4 < p < n/2 (p >= 1 for n = 3).
inline ExponentPlan plan_hartree(int n, const Q& p, std::optional<Q> sigma = {}) {
  require(n >= 3, "Hartree plan needs n >= 3");
  const bool p_ok = p > Q(n, 4) && p < Q(n, 2) && (n != 3 || p >= Q(1));
  const Q sc = p >= Q(1) ? sigma_c(n, p, NonlinearityKind::Hartree).value
                         : Q(n) / (Q(2) * p) - Q(1);
  if (!p_ok) {
    auto plan = detail::invalid_plan(n, NonlinearityKind::Hartree, sc, PlanBranch::Hartree,
                                     "p outside (n/4, n/2) (p >= 1 for n = 3)");
    plan.p = p;
    return plan;
  }
  ExponentPlan plan;
  plan.n = n;
  plan.p = p;
  plan.kind = NonlinearityKind::Hartree;
  plan.sigma_c = sc;
  plan.branch = PlanBranch::Hartree;
  detail::fill_high_dim(plan, sigma);
  if (!plan.reason.empty() || !plan.ledger.empty()) {
    plan.finalize();
    return plan;
  }
  const Q& th = plan.theta;
  const Q& s = plan.sigma;
  plan.delta = Q(1) - th / Q(2);
  plan.check("homogeneity", sc == th / Q(4) + (Q(1) - th) * s);
  if (n >= 4) plan.check("theta_cap", th * (Q(n - 3) + Q(4) * s) <= Q(4) * s);
  plan.check("0<theta<=1", th > Q(0) && th <= Q(1));
  plan.check("0<=sigma<=1", s >= Q(0) && s <= Q(1));
  plan.check("theta=2(1-delta)", th == Q(2) * (Q(1) - plan.delta));
  plan.check("0<2/k<=1", Q(2) / plan.k > Q(0) && Q(2) / plan.k <= Q(1));
  plan.check("2/k=1-delta", Q(2) / plan.k == Q(1) - plan.delta);
  plan.check("n/l=n/2-sigma_c+delta-1", Q(n) / plan.ell == Q(n, 2) - sc + plan.delta - Q(1));
  plan.check("scaling", Q(2) / plan.k + Q(n) / plan.ell == Q(n, 2) - sc);
  plan.check("0<=delta<=1", plan.delta >= Q(0) && plan.delta <= Q(1));
  plan.finalize();
  return plan;
}

/// Dispatch on dimension and kind.
inline ExponentPlan plan_exponents(int n, const Q& p, NonlinearityKind kind,
                                   std::optional<Q> sigma = {}) {
  if (kind == NonlinearityKind::Hartree) return plan_hartree(n, p, sigma);
  if (n == 1) return plan_nls_1d(p, sigma);
  return plan_nls_high_dim(n, p, sigma);
}

// ---------------------------------------------------------------------------
// Leibniz / Sobolev exponent for rho

struct LeibnizExponent {
  Q target;       // (2/r - sigma)^{-1}
  Q u_exponent;   // (1/r - sigma)^{-1}, the Sobolev partner of u
};

/// Needs 0 <= sigma < 1/r <= 1/2.
inline LeibnizExponent leibniz_exponent_check(const Q& sigma, const Q& r) {
  const Q inv_r = r.reciprocal();
  require(sigma >= Q(0) && sigma < inv_r && inv_r <= Q(1, 2),
          "Leibniz exponents need 0 <= sigma < 1/r <= 1/2");
  return {(Q(2) * inv_r - sigma).reciprocal(), (inv_r - sigma).reciprocal()};
}

/// Lower sigma bound obtained by working with rho instead of u (n >= 4).
inline Q sigma_0_via_density(int n, const Q& sc) {
  require(n >= 4, "needs n >= 4");
  return Q(2) * sc * Q(n - 3) / (Q(2 * n - 5) - Q(4) * sc);
}

// ---------------------------------------------------------------------------
// Partition of a time series into intervals of bounded integral

struct TimeInterval {
  std::size_t first = 0;  // sample indices, inclusive
  std::size_t last = 0;
  double mass = 0.0;
};

/// Greedy left-to-right maximal intervals with trapezoid integral <= budget.
/// Consecutive intervals share their boundary sample. Greedy is optimal for
/// this covering problem.
inline std::vector<TimeInterval> partition_intervals(const std::vector<double>& times,
                                                     const std::vector<double>& m,
                                                     double budget) {
  require(times.size() == m.size() && times.size() >= 2, "need at least two samples");
  require(budget > 0.0, "budget must be positive");
  for (double v : m) require(v >= 0.0, "series must be nonnegative");
  std::vector<TimeInterval> out;
  TimeInterval cur{0, 0, 0.0};
  for (std::size_t i = 1; i < times.size(); ++i) {
    require(times[i] > times[i - 1], "times must increase");
    const double piece = 0.5 * (m[i] + m[i - 1]) * (times[i] - times[i - 1]);
    require(piece <= budget, "a single sample interval exceeds the budget");
    if (cur.mass + piece > budget) {
      out.push_back(cur);
      cur = {i - 1, i - 1, 0.0};
    }
    cur.last = i;
    cur.mass += piece;
  }
  out.push_back(cur);
  return out;
}

/// Budget on the integral of ||rho; H^{(3-n)/2}||^2 that keeps
/// M1 ||rho; L^2(I, H^{(3-n)/2})||^{theta(p-1)/2} <= 1/2.
inline double partition_budget(double M1, double theta, double p) {
  require(M1 > 0.0 && theta > 0.0 && p > 1.0, "budget needs M1 > 0, theta > 0, p > 1");
  return std::pow(1.0 / (2.0 * M1), 4.0 / (theta * (p - 1.0)));
}

}  // namespace morlab
