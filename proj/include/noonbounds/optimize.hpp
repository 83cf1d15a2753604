// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "noonbounds/core.hpp"
#include "noonbounds/interferometer.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace noonbounds {

struct NelderMeadOptions {
  double spread_tolerance = 1e-10;  // stop when f_max - f_min falls below
  int max_evaluations = 5000;
  double initial_step = 0.5;
};

struct HistoryPoint {
  int iteration = 0;
  double objective = 0.0;  // best value after the iteration
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
  std::vector<HistoryPoint> history;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization (reflect / expand / contract /
/// shrink). Non-finite objective values are treated as +infinity.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& opts = {});

struct OptimizeOptions {
  int restarts = 32;
  std::uint64_t seed = 1;
  NelderMeadOptions simplex;
};

struct OptimizationResult {
  double best_crb = 0.0;
  WeightVector best_weights;
  MeshParams best_mesh;  // canonical angle ranges
  int restarts_used = 0;
  bool converged = false;
  std::vector<HistoryPoint> history;  // of the winning restart
};

/// CRB with the weights held fixed, minimized over the mesh from `restarts`
/// random initial meshes.
OptimizationResult optimize_mesh_for_state(const Scenario& s, const WeightVector& p,
                                           const OptimizeOptions& opts = {});

/// CRB minimized jointly over weights (softmax parameterization) and mesh.
/// Seeds one extra restart from the mesh-only optimum at the QCRB-optimal
/// weights, so the result never exceeds that value.
OptimizationResult optimize_joint(const Scenario& s, const OptimizeOptions& opts = {});

/// History as CSV with header "iteration,objective".
std::string history_csv(std::span<const HistoryPoint> history);

}  // namespace noonbounds
