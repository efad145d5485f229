#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "commonsys/counting.hpp"
#include "commonsys/harmonic.hpp"
#include "commonsys/linsys.hpp"

namespace commonsys {

/// Largest p^n the search accepts.
inline constexpr std::uint64_t kMaxSearchSize = std::uint64_t(1) << 20;

struct SearchConfig {
  Property objective = Property::common();
  std::uint32_t p = 3;
  std::uint32_t n = 1;
  std::size_t restarts = 16;
  std::size_t max_iters = 500;
  double step = 0.1;          // initial step, halved on failure
  double step_floor = 1e-12;
  std::uint64_t seed = 1;
  double gradient_tolerance = 1e-8;
  double violation_threshold = -1e-6;
  /// Pinned mean. Forced to 1/2 for GeometricCommon and to objective.alpha
  /// for Prevalence.
  std::optional<double> mean;

  std::optional<double> effective_mean() const;
};

struct SearchResult {
  GroupFunction best;
  /// Re-evaluated with t_fourier; for Alon(l) this is 2^l times the defect.
  double best_defect = 0.0;
  std::size_t iterations = 0;        // iterations of the winning restart
  std::size_t total_iterations = 0;  // summed over restarts
  bool converged = false;
  bool violation = false;
  std::size_t best_restart = 0;
  std::uint64_t best_seed = 0;
  DefectReport report;
};

/// Euclidean projection onto [0,1]^N, or onto {f in [0,1]^N : mean f = alpha}
/// (clip(v - mu) with mu found by bisection). Throws InfeasibleMean.
std::vector<double> project_box_mean(std::span<const double> v, std::optional<double> alpha);
GroupFunction project_box_mean(const GroupFunction& v, std::optional<double> alpha);

/// 1/2 + eps cos(2 pi (h.x + k) / p).
GroupFunction character_bump(std::uint32_t p, std::uint32_t n, std::size_t h, std::uint32_t k, double eps);

/// Seed for restart r derived from the base seed (splitmix64).
std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart);

/// Projected gradient descent on the defect with random restarts.
SearchResult minimize_defect(const LinearSystem& s, const SearchConfig& cfg);

struct ScanRow {
  double alpha = 0.0;
  SearchResult result;
};

/// One pinned-mean search per grid point alpha_k = k/(resolution+1),
/// k = 1..resolution; a single row at 1/2 for the geometric property.
std::vector<ScanRow> scan_alpha(const LinearSystem& s, const SearchConfig& base, std::size_t resolution);

}  // namespace commonsys
