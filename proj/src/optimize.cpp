// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/optimize.hpp"

#include "noonbounds/bounds.hpp"
#include "noonbounds/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace noonbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  return std::isfinite(v) ? v : kInf;
}

MeshParams mesh_from_angles(int n_modes, std::span<const double> angles) {
  MeshParams mesh;
  mesh.n_modes = n_modes;
  const auto modes = MeshParams::clements_modes(n_modes);
  mesh.layers.reserve(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i)
    mesh.layers.push_back({modes[i], angles[2 * i], angles[2 * i + 1]});
  return mesh;
}

std::vector<double> angles_from_mesh(const MeshParams& mesh) {
  std::vector<double> x;
  x.reserve(2 * mesh.layers.size());
  for (const auto& l : mesh.layers) {
    x.push_back(l.theta);
    x.push_back(l.chi);
  }
  return x;
}

WeightVector softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> e(logits.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(logits[i] - top);
  return WeightVector::from_raw(e);
}

double crb_or_inf(const Scenario& s, const WeightVector& p, const MeshParams& mesh) {
  try {
    return crb(outcome_distribution(s, p, assemble_unitary(mesh)));
  } catch (const Error&) {
    return kInf;
  }
}

struct Candidate {
  NelderMeadResult run;
  bool valid = false;
};

// Runs one simplex search per start and keeps the lowest; ties go to the
// lowest restart index so the answer does not depend on thread scheduling.
Candidate best_of(const Objective& f, const std::vector<std::vector<double>>& starts,
                  const NelderMeadOptions& opts) {
  std::vector<NelderMeadResult> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t r) { runs[r] = nelder_mead(f, starts[r], opts); });
  Candidate best;
  for (auto& run : runs) {
    if (!std::isfinite(run.value)) continue;
    if (!best.valid || run.value < best.run.value) {
      best.run = std::move(run);
      best.valid = true;
    }
  }
  return best;
}

void require_restarts(const OptimizeOptions& opts) {
  if (opts.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
}

[[noreturn]] void all_singular() {
  throw Error(ErrorCode::OptimizationFailed,
              "every restart produced a singular FIM; try different evaluation phases");
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& opts) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  const std::size_t n = x0.size();
  NelderMeadResult out;
  if (n == 0) {
    out.x = std::move(x0);
    out.value = safe_eval(f, out.x);
    out.evaluations = 1;
    out.converged = true;
    return out;
  }

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opts.initial_step;
  std::vector<double> vals(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return safe_eval(f, x);
  };
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto point_along = [&](double t, std::vector<double>& dst) {
    // centroid + t (centroid - worst)
    const auto& worst = pts[order[n]];
    for (std::size_t k = 0; k < n; ++k) dst[k] = centroid[k] + t * (centroid[k] - worst[k]);
  };

  int iteration = 0;
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const double best = vals[order[0]];
    const double worst = vals[order[n]];
    if (iteration > 0) out.history.push_back({iteration, best});
    if (std::isfinite(worst) && worst - best < opts.spread_tolerance) {
      out.converged = true;
      break;
    }
    if (evals >= opts.max_evaluations) break;
    ++iteration;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[order[i]][k];
    for (double& c : centroid) c /= static_cast<double>(n);

    point_along(kReflect, trial);
    const double fr = eval(trial);
    const double second_worst = vals[order[n - 1]];
    if (fr < best) {
      point_along(kExpand, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[order[n]] = trial2;
        vals[order[n]] = fe;
      } else {
        pts[order[n]] = trial;
        vals[order[n]] = fr;
      }
      continue;
    }
    if (fr < second_worst) {
      pts[order[n]] = trial;
      vals[order[n]] = fr;
      continue;
    }
    // Contraction: outside if the reflection improved on the worst point.
    const bool outside = fr < worst;
    point_along(outside ? kContract : -kContract, trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : worst)) {
      pts[order[n]] = trial2;
      vals[order[n]] = fc;
      continue;
    }
    const auto& anchor = pts[order[0]];
    for (std::size_t i = 1; i <= n; ++i) {
      auto& p = pts[order[i]];
      for (std::size_t k = 0; k < n; ++k) p[k] = anchor[k] + kShrink * (p[k] - anchor[k]);
      vals[order[i]] = eval(p);
    }
  }

  out.x = pts[order[0]];
  out.value = vals[order[0]];
  out.evaluations = evals;
  return out;
}

OptimizationResult optimize_mesh_for_state(const Scenario& s, const WeightVector& p,
                                           const OptimizeOptions& opts) {
  require_restarts(opts);
  const int modes = s.n_modes();
  std::vector<std::vector<double>> starts;
  for (int r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(mix_seed(opts.seed, static_cast<std::uint64_t>(r)));
    starts.push_back(angles_from_mesh(MeshParams::random(modes, rng)));
  }
  const Objective f = [&](std::span<const double> x) {
    return crb_or_inf(s, p, mesh_from_angles(modes, x));
  };
  Candidate best = best_of(f, starts, opts.simplex);
  if (!best.valid) all_singular();

  OptimizationResult out;
  out.best_crb = best.run.value;
  out.best_weights = p;
  out.best_mesh = canonicalize(mesh_from_angles(modes, best.run.x));
  out.restarts_used = opts.restarts;
  out.converged = best.run.converged;
  out.history = std::move(best.run.history);
  return out;
}

OptimizationResult optimize_joint(const Scenario& s, const OptimizeOptions& opts) {
  require_restarts(opts);
  const int modes = s.n_modes();
  const WeightVector p_opt = optimal_weights(s);
  const OptimizationResult mesh_only = optimize_mesh_for_state(s, p_opt, opts);

  std::vector<double> base_logits(p_opt.size());
  for (std::size_t j = 0; j < p_opt.size(); ++j) base_logits[j] = std::log(p_opt[j]);

  std::vector<std::vector<double>> starts;
  {
    auto warm = angles_from_mesh(mesh_only.best_mesh);
    warm.insert(warm.end(), base_logits.begin(), base_logits.end());
    starts.push_back(std::move(warm));
  }
  for (int r = 0; r < opts.restarts; ++r) {
    // Distinct stream from the mesh-only stage.
    std::mt19937_64 rng(mix_seed(opts.seed ^ 0x6a6f696e74ull, static_cast<std::uint64_t>(r)));
    auto x = angles_from_mesh(MeshParams::random(modes, rng));
    x.insert(x.end(), base_logits.begin(), base_logits.end());
    starts.push_back(std::move(x));
  }
  const std::size_t n_angles = 2 * MeshParams::clements_modes(modes).size();
  const Objective f = [&](std::span<const double> x) {
    return crb_or_inf(s, softmax(x.subspan(n_angles)), mesh_from_angles(modes, x.first(n_angles)));
  };
  Candidate best = best_of(f, starts, opts.simplex);
  if (!best.valid) all_singular();

  OptimizationResult out;
  if (best.run.value > mesh_only.best_crb) {
    // The warm start reproduces the mesh-only value only up to rounding of
    // the canonicalized angles.
    out = mesh_only;
  } else {
    const std::span<const double> x(best.run.x);
    out.best_crb = best.run.value;
    out.best_weights = softmax(x.subspan(n_angles));
    out.best_mesh = canonicalize(mesh_from_angles(modes, x.first(n_angles)));
    out.converged = best.run.converged;
    out.history = std::move(best.run.history);
  }
  out.restarts_used = 2 * opts.restarts + 1;
  return out;
}

std::string history_csv(std::span<const HistoryPoint> history) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,objective\n";
  for (const auto& h : history) os << h.iteration << ',' << h.objective << '\n';
  return os.str();
}

}  // namespace noonbounds
