#include "commonsys/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "commonsys/error.hpp"
#include "commonsys/parallel.hpp"

namespace commonsys {

std::optional<double> SearchConfig::effective_mean() const {
  if (objective.kind == PropertyKind::GeometricCommon) return 0.5;
  if (objective.kind == PropertyKind::Prevalence) {
    if (!objective.alpha) throw Error(Errc::InvalidArgument, "prevalence objective needs alpha");
    return objective.alpha;
  }
  return mean;
}

std::vector<double> project_box_mean(std::span<const double> v, std::optional<double> alpha) {
  std::vector<double> out(v.size());
  auto clip = [](double x) { return std::clamp(x, 0.0, 1.0); };
  if (!alpha) {
    std::transform(v.begin(), v.end(), out.begin(), clip);
    return out;
  }
  const double a = *alpha;
  if (!(a >= 0.0 && a <= 1.0)) throw Error(Errc::InfeasibleMean, "mean " + std::to_string(a) + " outside [0,1]");
  if (v.empty()) return out;
  const double count = static_cast<double>(v.size());
  const double target = a * count;
  auto mass = [&](double mu) {
    double s = 0.0;
    for (double x : v) s += clip(x - mu);
    return s;
  };
  double lo = *std::min_element(v.begin(), v.end()) - 1.0;  // mass(lo) = N
  double hi = *std::max_element(v.begin(), v.end());        // mass(hi) = 0
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mass(mid) > target) lo = mid; else hi = mid;
  }
  double mu = 0.5 * (lo + hi);
  // Solve exactly on the clipping pattern found by bisection.
  double free_sum = 0.0, ones = 0.0, free_count = 0.0;
  for (double x : v) {
    double y = x - mu;
    if (y >= 1.0) ones += 1.0;
    else if (y > 0.0) {
      free_sum += x;
      free_count += 1.0;
    }
  }
  if (free_count > 0.0) {
    double refined = (free_sum - (target - ones)) / free_count;
    if (std::abs(mass(refined) - target) <= std::abs(mass(mu) - target)) mu = refined;
  }
  std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return clip(x - mu); });
  return out;
}

GroupFunction project_box_mean(const GroupFunction& v, std::optional<double> alpha) {
  return GroupFunction(v.p(), v.n(), project_box_mean(v.values(), alpha));
}

GroupFunction character_bump(std::uint32_t p, std::uint32_t n, std::size_t h, std::uint32_t k, double eps) {
  FpnSpace space(p, n);
  std::vector<double> v(space.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    double phase = 2.0 * std::numbers::pi * static_cast<double>((space.dot(h, x) + k) % p) / p;
    v[x] = 0.5 + eps * std::cos(phase);
  }
  return GroupFunction(p, n, std::move(v));
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(restart) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Objective in "defect" units (2^l-scaled for Alon) and its gradient scaled
// by p^n, i.e. in the units of t_gradient.
class DefectObjective {
 public:
  DefectObjective(const LinearSystem& s, Property property) : s_(s), property_(property) {}

  double value(const GroupFunction& f) const {
    double tf = t_product(s_, f);
    double t1 = t_product(s_, f.complement());
    return defect_formula(property_, tf, t1, mean(f), s_.variables()).second;
  }

  std::vector<double> gradient(const GroupFunction& f) const {
    const std::size_t t = s_.variables();
    const double alpha = mean(f);
    GroupFunction gf = t_gradient(s_, f);
    std::vector<double> out(f.size());
    switch (property_.kind) {
      case PropertyKind::Prevalence:
        for (std::size_t x = 0; x < out.size(); ++x) out[x] = gf[x];
        break;
      case PropertyKind::Sidorenko: {
        double d = static_cast<double>(t) * std::pow(alpha, static_cast<double>(t) - 1.0);
        for (std::size_t x = 0; x < out.size(); ++x) out[x] = gf[x] - d;
        break;
      }
      case PropertyKind::Common: {
        GroupFunction g1 = t_gradient(s_, f.complement());
        for (std::size_t x = 0; x < out.size(); ++x) out[x] = gf[x] - g1[x];
        break;
      }
      case PropertyKind::GeometricCommon: {
        GroupFunction comp = f.complement();
        GroupFunction g1 = t_gradient(s_, comp);
        double tf = t_product(s_, f), t1 = t_product(s_, comp);
        for (std::size_t x = 0; x < out.size(); ++x) out[x] = gf[x] * t1 - tf * g1[x];
        break;
      }
      case PropertyKind::Alon: {
        GroupFunction comp = f.complement();
        GroupFunction g1 = t_gradient(s_, comp);
        double tf = t_product(s_, f), t1 = t_product(s_, comp);
        const double l = static_cast<double>(*property_.l);
        const double a = 2.0 * alpha, b = 2.0 * (1.0 - alpha);
        double pa = std::pow(a, l), pb = std::pow(b, l);
        double da = l > 0 ? 2.0 * l * std::pow(a, l - 1.0) : 0.0;
        double db = l > 0 ? 2.0 * l * std::pow(b, l - 1.0) : 0.0;
        for (std::size_t x = 0; x < out.size(); ++x)
          out[x] = da * tf + pa * gf[x] - db * t1 - pb * g1[x];
        break;
      }
    }
    return out;
  }

 private:
  const LinearSystem& s_;
  Property property_;
};

struct RestartOutcome {
  GroupFunction f = GroupFunction::constant(3, 1, 0.5);
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

GroupFunction initial_point(std::uint32_t p, std::uint32_t n, std::size_t restart, std::mt19937_64& rng) {
  FpnSpace space(p, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> residue(0, p - 1);
  auto nonzero_point = [&] {
    std::size_t h = 0;
    while (h == 0) h = std::uniform_int_distribution<std::size_t>(0, space.size() - 1)(rng);
    return h;
  };
  std::vector<double> v(space.size());
  switch (restart % 4) {
    case 0:
      for (auto& x : v) x = 0.5 + 0.1 * (unit(rng) - 0.5);
      return GroupFunction(p, n, std::move(v));
    case 1:
      for (auto& x : v) x = unit(rng);
      return GroupFunction(p, n, std::move(v));
    case 2: {
      std::size_t a = nonzero_point();
      return GroupFunction::coset_indicator(p, n, space.digits(a), residue(rng));
    }
    default: {
      std::size_t h = nonzero_point();
      std::uint32_t k = residue(rng);
      double eps = 0.1 + 0.4 * unit(rng);
      return character_bump(p, n, h, k, eps);
    }
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

RestartOutcome run_restart(const DefectObjective& objective, const SearchConfig& cfg,
                           std::optional<double> pinned, std::size_t restart) {
  RestartOutcome out;
  out.seed = restart_seed(cfg.seed, restart);
  std::mt19937_64 rng(out.seed);
  GroupFunction f = project_box_mean(initial_point(cfg.p, cfg.n, restart, rng), pinned);
  double value = objective.value(f);
  double eta = cfg.step;
  std::vector<double> moved(f.size());

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    if (value < cfg.violation_threshold) break;
    std::vector<double> grad = objective.gradient(f);
    for (std::size_t x = 0; x < moved.size(); ++x) moved[x] = f[x] - grad[x];
    auto proj = project_box_mean(moved, pinned);
    double pg = 0.0;
    for (std::size_t x = 0; x < proj.size(); ++x) pg = std::max(pg, std::abs(f[x] - proj[x]));
    if (pg < cfg.gradient_tolerance) {
      out.converged = true;
      break;
    }
    double scale = max_abs(grad);
    bool accepted = false;
    while (eta >= cfg.step_floor) {
      for (std::size_t x = 0; x < moved.size(); ++x) moved[x] = f[x] - eta * grad[x] / scale;
      GroupFunction trial(cfg.p, cfg.n, project_box_mean(moved, pinned));
      double tv = objective.value(trial);
      if (tv < value) {
        f = std::move(trial);
        value = tv;
        eta = std::min(cfg.step, 2.0 * eta);
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    out.iterations = it + 1;
    if (!accepted) {
      out.converged = true;
      break;
    }
  }
  out.f = std::move(f);
  out.value = value;
  return out;
}

}  // namespace

SearchResult minimize_defect(const LinearSystem& s, const SearchConfig& cfg) {
  if (cfg.restarts == 0) throw Error(Errc::InvalidArgument, "restarts must be >= 1");
  if (cfg.objective.kind == PropertyKind::Alon && !cfg.objective.l) throw Error(Errc::MissingL, "Alon objective needs l");
  if (cfg.p != s.modulus()) throw Error(Errc::InvalidArgument, "search modulus differs from system modulus");
  FpnSpace space(cfg.p, cfg.n);
  if (space.size() > kMaxSearchSize) throw Error(Errc::TooLarge, "p^n exceeds 2^20 for search");
  std::optional<double> pinned = cfg.effective_mean();
  if (pinned && !(*pinned >= 0.0 && *pinned <= 1.0)) throw Error(Errc::InfeasibleMean, "pinned mean outside [0,1]");

  DefectObjective objective(s, cfg.objective);
  auto outcomes = chunked_map<RestartOutcome>(
      cfg.restarts, cfg.restarts,
      [&](std::uint64_t begin, std::uint64_t) { return run_restart(objective, cfg, pinned, begin); });

  std::size_t best = 0;
  SearchResult result{outcomes[0].f, 0.0, 0, 0, false, false, 0, 0, {}};
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.total_iterations += outcomes[r].iterations;
    const auto& a = outcomes[r];
    const auto& b = outcomes[best];
    if (a.value < b.value || (a.value == b.value && a.seed < b.seed)) best = r;
  }
  const auto& win = outcomes[best];
  result.best = win.f;
  result.iterations = win.iterations;
  result.converged = win.converged;
  result.best_restart = best;
  result.best_seed = win.seed;
  result.report = defect(s, win.f, cfg.objective, Method::Fourier);
  result.best_defect = result.report.scaled_value;
  result.violation = result.best_defect < -1e-6;
  return result;
}

std::vector<ScanRow> scan_alpha(const LinearSystem& s, const SearchConfig& base, std::size_t resolution) {
  if (resolution < 3) throw Error(Errc::InvalidArgument, "grid resolution must be >= 3");
  std::vector<double> grid;
  if (base.objective.kind == PropertyKind::GeometricCommon) {
    grid.push_back(0.5);
  } else {
    for (std::size_t k = 1; k <= resolution; ++k)
      grid.push_back(static_cast<double>(k) / static_cast<double>(resolution + 1));
  }
  std::vector<ScanRow> rows;
  for (double alpha : grid) {
    SearchConfig cfg = base;
    cfg.mean = alpha;
    if (cfg.objective.kind == PropertyKind::Prevalence) cfg.objective.alpha = alpha;
    rows.push_back({alpha, minimize_defect(s, cfg)});
  }
  return rows;
}

}  // namespace commonsys
