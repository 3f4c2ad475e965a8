#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "morlab/grid.hpp"

namespace morlab::fft {

enum class Direction : int { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD };

namespace detail {

// FFTW's planner is not reentrant; execution of an existing plan on new
// arrays is. Plans are created once per (shape, direction) under a lock and
// kept for the life of the process. FFTW_ESTIMATE keeps plan selection (and
// therefore every output bit) independent of timing.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const std::vector<int>& dims, Direction dir) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(dims, static_cast<int>(dir));
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), scratch, scratch,
                                   static_cast<int>(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

}  // namespace detail

/// Unnormalized in-place multidimensional DFT (row-major, last axis fastest).
inline void transform(std::span<Complex> data, const std::vector<int>& dims, Direction dir) {
  fftw_plan plan = detail::PlanCache::instance().get(dims, dir);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

inline std::vector<int> grid_dims(const GridSpec& g) { return std::vector<int>(g.dim, g.points); }

inline void forward(std::vector<Complex>& data, const GridSpec& g) {
  transform(data, grid_dims(g), Direction::Forward);
}

/// Inverse DFT including the 1/size normalization.
inline void inverse(std::vector<Complex>& data, const GridSpec& g) {
  transform(data, grid_dims(g), Direction::Backward);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

}  // namespace morlab::fft
