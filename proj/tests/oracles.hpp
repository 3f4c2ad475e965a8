#pragma once

// Brute-force references shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "morlab/morlab.hpp"

namespace morlab::oracle {

/// Feasibility of sigma from the interpolation constraints alone:
/// sigma_c = theta/4 + (1-theta) sigma, 0 < theta <= 1, and for n >= 4
/// theta (n-3)/4 <= (1-theta) sigma.
inline bool feasible_high_dim(int n, const Q& sc, const Q& s) {
  const Q quarter(1, 4);
  if (s < Q(0) || s > Q(1)) return false;
  // at sigma_c = 1/4 theta = 1 leaves sigma free; the plan is the point 1/4
  if (s == quarter || sc == quarter) return s == sc;
  const Q th = (sc - s) / (quarter - s);
  if (!(th > Q(0) && th <= Q(1))) return false;
  if (n >= 4 && !(th * Q(n - 3) / Q(4) <= (Q(1) - th) * s)) return false;
  return true;
}

/// n = 1 with r = 2: sigma_c = theta/4 + (1-theta) sigma and
/// 0 <= -theta/4 + (1-theta)(1/2 - sigma) <= (1/2 - sigma_c)/2, sigma < 1/2.
inline bool feasible_1d(const Q& sc, const Q& s) {
  const Q quarter(1, 4);
  if (s < Q(0) || s >= Q(1, 2)) return false;
  if (s == quarter) return sc == quarter;
  const Q th = (sc - s) / (quarter - s);
  if (!(th > Q(0) && th <= Q(1))) return false;
  const Q inv_ell = -th / Q(4) + (Q(1) - th) * (Q(1, 2) - s);
  return inv_ell >= Q(0) && inv_ell <= (Q(1, 2) - sc) / Q(2);
}

/// Minimal number of pieces over all split placements (splits at samples).
inline std::size_t exhaustive_min(const std::vector<double>& t, const std::vector<double>& m, double B) {
  const std::size_t segs = t.size() - 1;
  std::size_t best = segs + 1;
  for (std::uint32_t mask = 0; mask < (1u << (segs - 1)); ++mask) {
    double acc = 0.0;
    bool ok = true;
    std::size_t count = 1;
    for (std::size_t s = 0; s < segs && ok; ++s) {
      acc += 0.5 * (m[s] + m[s + 1]) * (t[s + 1] - t[s]);
      if (acc > B) ok = false;
      if (s + 1 < segs && (mask >> s & 1u)) {
        ++count;
        acc = 0.0;
      }
    }
    if (ok) best = std::min(best, count);
  }
  return best;
}

struct ScanCase {
  int n;
  Q p;
  NonlinearityKind kind;
};

/// The (n, p) pairs whose feasible sets are compared with a 1/64 scan.
inline std::vector<ScanCase> grid_scan_cases() {
  return {
      {1, Q(6), NonlinearityKind::Nls},     {1, Q(7), NonlinearityKind::Nls},
      {1, Q(8), NonlinearityKind::Nls},     {1, Q(9), NonlinearityKind::Nls},
      {1, Q(11), NonlinearityKind::Nls},    {1, Q(13), NonlinearityKind::Nls},
      {1, Q(15, 2), NonlinearityKind::Nls}, {2, Q(7, 2), NonlinearityKind::Nls},
      {2, Q(5), NonlinearityKind::Nls},     {2, Q(9), NonlinearityKind::Nls},
      {3, Q(4), NonlinearityKind::Nls},     {3, Q(9, 2), NonlinearityKind::Nls},
      {3, Q(19, 5), NonlinearityKind::Nls}, {4, Q(5, 2), NonlinearityKind::Nls},
      {4, Q(11, 4), NonlinearityKind::Nls}, {5, Q(9, 4), NonlinearityKind::Nls},
      {5, Q(11, 5), NonlinearityKind::Nls}, {6, Q(9, 5), NonlinearityKind::Nls},
      {3, Q(9, 7), NonlinearityKind::Hartree}, {4, Q(3, 2), NonlinearityKind::Hartree},
  };
}

}  // namespace morlab::oracle
